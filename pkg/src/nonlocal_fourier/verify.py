"""Invariant suite run by ``nonlocal-fourier verify``.

Each check returns a measured value and the tolerance it is held to. A
check that raises is recorded as failed with the exception text, so one
broken stage never hides the rest of the report.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .boundary import apply_U, check_conditions
from .characteristic import CharacteristicFn, delta
from .config import RunConfig, double_fixture
from .convolution import ConvolutionEngine, convolve_resolvent_form, exponential_identity
from .expansion import (biorthogonality_matrix, build_root_basis, bump_function, cauchy_convolve,
                        coefficients, fourier_transform, partial_sums, project, project_contour,
                        random_smooth, remainder_exp_contour, weighted_remainder_norm)
from .function_space import GridFunction, differentiate
from .resolvent import apply_resolvent
from .spectrum import Circle, Rectangle, count_zeros, find_spectrum


@dataclass
class Check:
    name: str
    passed: bool
    value: float | None = None
    tol: float | None = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        val = "" if self.value is None else f" value={self.value:.3e}"
        tol = "" if self.tol is None else f" tol={self.tol:.1e}"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}{val}{tol}{extra}"

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "value": self.value,
                "tol": self.tol, "detail": self.detail}


@dataclass
class VerifyReport:
    label: str
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self):
        out = [c.line() for c in self.checks]
        n_ok = sum(c.passed for c in self.checks)
        out.append(f"{self.label}: {n_ok}/{len(self.checks)} checks passed in {self.elapsed:.1f} s")
        return out

    def to_dict(self):
        return {"label": self.label, "passed": self.passed, "elapsed": self.elapsed,
                "checks": [c.to_dict() for c in self.checks]}


class _Suite:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.sigma = cfg.build_sigma()
        self.grid = cfg.grid
        self.cf = CharacteristicFn(self.sigma)
        self.engine = ConvolutionEngine(self.sigma, self.grid)
        self.rng = np.random.default_rng(cfg.seed)
        self.checks: list[Check] = []
        self.spectrum = None

    def run(self, name, fn):
        try:
            res = fn()
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            self.checks.append(Check(name, False, detail=f"{type(exc).__name__}: {exc}"))
            return
        for c in res if isinstance(res, list) else [res]:
            self.checks.append(c)

    @staticmethod
    def within(name, value, tol, detail=""):
        value = float(value)
        return Check(name, bool(np.isfinite(value) and value < tol), value, tol, detail)

    def rand_f(self):
        return random_smooth(self.grid, self.rng)

    def nonspectral(self, k, lo=0.05):
        out = []
        while len(out) < k:
            lam = complex(self.rng.uniform(-5, 5), self.rng.uniform(-1, 1))
            if abs(delta(self.cf, lam)) > lo:
                out.append(lam)
        return out

    def domain_function(self):
        """A random element of D(L): the resolvent applied to a random function."""
        lam = self.nonspectral(1)[0]
        return apply_resolvent(self.sigma, self.cf, lam, self.rand_f()).y

    # ------------------------------------------------------------ stages
    def characteristic(self):
        lam = (self.rng.uniform(-8, 8, 12) + 1j * self.rng.uniform(-1, 1, 12)).astype(complex)
        out = []
        if self.sigma.kind == "zero":
            out.append(self.within("delta identically one", np.abs(delta(self.cf, lam) - 1).max(), 1e-14))
        if self.cf.closed_form:
            dc = delta(self.cf, lam, "closed")
            dq = delta(self.cf, lam, "quadrature")
            rel = np.abs(dc - dq) / np.maximum(1.0, np.abs(dc))
            out.append(self.within("delta quadrature vs closed form", rel.max(), 1e-12))
        return out

    def spectrum_stage(self):
        R = self.cfg.radius
        sp = find_spectrum(self.cf, R, tol_zero=self.cfg.tol_zero, contour_points=self.cfg.contour_points)
        self.spectrum = sp
        out = [Check("spectrum located", True, float(len(sp)), detail=f"{len(sp)} eigenvalues in |lambda| <= {R}")]
        preset = self.cfg.sigma if isinstance(self.cfg.sigma, str) else None
        if preset == "antiperiodic" and abs(self.sigma.b - np.pi) < 1e-15:
            exact = np.array([k for k in range(-int(R) - 1, int(R) + 2) if k % 2 and abs(k) <= R], dtype=float)
            got = np.array([ev.lam for ev in sp])
            ok = got.size == exact.size and all(ev.multiplicity == 1 for ev in sp)
            out.append(Check("antiperiodic spectrum = odd integers", ok, float(got.size), detail=f"expected {exact.size}"))
            if ok:
                out.append(self.within("antiperiodic eigenvalue error", np.abs(got - exact).max(), 1e-8))
                d0 = np.array([ev.taylor[0] for ev in sp])
                out.append(self.within("antiperiodic d0 = 2i/pi", np.abs(d0 - 2j / np.pi).max(), 1e-8))
        if preset == "double":
            fx = double_fixture()
            r = min(R, fx["radius"])
            exact = [fx["lambda_star"]] + fx["other_zeros"]
            exact = [z for z in exact if abs(z) <= r]
            got = [ev for ev in sp if abs(ev.lam) <= r]
            ok = len(got) == len(exact)
            out.append(Check("double fixture zero count", ok, float(len(got)), detail=f"expected {len(exact)}"))
            if ok:
                err = max(min(abs(ev.lam - z) for z in exact) for ev in got)
                out.append(self.within("double fixture zero locations", err, 1e-8))
                star = min(got, key=lambda ev: abs(ev.lam - fx["lambda_star"]))
                out.append(Check("double fixture multiplicity 2", star.multiplicity == 2, float(star.multiplicity)))
                out.append(self.within("double fixture Taylor data", np.abs(star.taylor - fx["taylor"]).max(), 1e-7))
            out.append(self.box_additivity())
        if preset in ("empty", "zero"):
            n = count_zeros(self.cf, Circle(0j, 100.0))
            out.append(Check("empty spectrum in |lambda| <= 100", n == 0 and not sp, float(n)))
        return out

    def box_additivity(self):
        H = self.cfg.radius + 0.5
        box = Rectangle(-H + 0.0071, H + 0.0071, -H + 0.0043, H + 0.0043)
        total = count_zeros(self.cf, box)
        parts = sum(count_zeros(self.cf, bx) for bx in self._quarters(box, 0.4871, 0.5213))
        return Check("zero count additive over 4 sub-boxes", parts == total, float(parts), detail=f"total {total}")

    @staticmethod
    def _quarters(box, fx, fy):
        xm = box.x0 + fx * (box.x1 - box.x0)
        ym = box.y0 + fy * (box.y1 - box.y0)
        return [Rectangle(a, b_, c, d) for a, b_ in ((box.x0, xm), (xm, box.x1)) for c, d in ((box.y0, ym), (ym, box.y1))]

    def counting(self):
        lo, hi = self.sigma.support_extrema()
        if not (lo == 0.0 and hi is not None and abs(hi - self.sigma.b) < 1e-12):
            return Check("counting function", True, detail="support condition fails; skipped")
        r = 50.0
        n = count_zeros(self.cf, Circle(0j, r))
        return self.within("counting |N(r)/r - b/pi| at r=50", abs(n / r - self.sigma.b / np.pi), 0.1)

    def conditions(self):
        rep = check_conditions(self.sigma, self.spectrum or [], self.cfg.radius)
        return Check("condition report", True, detail=f"support condition {'holds' if rep.conminmax_holds else 'fails'}")

    def resolvent(self):
        out = []
        ode = bc = dual = 0.0
        for lam in self.nonspectral(2):
            for _ in range(2):
                f = self.rand_f()
                r = apply_resolvent(self.sigma, self.cf, lam, f)
                fn = f.sup_norm()
                ode = max(ode, r.residual_ode / ((1 + abs(lam)) * fn))
                bc = max(bc, r.residual_boundary / fn)
                y3 = convolve_resolvent_form(self.engine, self.cf, lam, f)
                dual = max(dual, (y3 - r.y).sup_norm() / max(r.y.sup_norm(), 1.0))
        out.append(self.within("resolvent ODE residual", ode, 1e-8))
        out.append(self.within("resolvent boundary residual", bc, 1e-8))
        out.append(self.within("resolvent direct vs convolution form", dual, 1e-8))
        return out

    def convolution(self):
        E = self.engine
        out = []
        comm = 0.0
        for _ in range(3):
            f, g = self.rand_f(), self.rand_f()
            fg = E.convolve(f, g)
            comm = max(comm, (fg - E.convolve(g, f)).sup_norm() / max(1.0, fg.sup_norm()))
        out.append(self.within("convolution commutative", comm, 1e-9))
        f, g, h = self.rand_f(), self.rand_f(), self.rand_f()
        lhs = E.convolve(E.convolve(f, g), h)
        rhs = E.convolve(f, E.convolve(g, h))
        out.append(self.within("convolution associative", (lhs - rhs).sup_norm() / max(1.0, lhs.sup_norm()), 1e-7))
        a = complex(self.rng.normal(), self.rng.normal())
        lin = E.convolve(a * f + g, h) - (a * E.convolve(f, h) + E.convolve(g, h))
        out.append(self.within("convolution bilinear", lin.sup_norm() / max(1.0, lhs.sup_norm()), 1e-10))
        fd = self.domain_function()
        fg = E.convolve(fd, g)
        d1 = differentiate(fg)
        d2 = E.convolve(differentiate(fd), g)
        out.append(self.within("derivative rule on D(L)", (d1 - d2).sup_norm() / max(1.0, d1.sup_norm()), 1e-7))
        out.append(self.within("domain closure |U(f*g)|", abs(apply_U(self.sigma, fg)) / max(1.0, fg.sup_norm()), 1e-7))
        one = self.grid.constant(1.0)
        of = E.convolve(one, f)
        out.append(self.within("-i d/dx (1*f) = f", (-1j * differentiate(of) - f).sup_norm(), 1e-8))
        out.append(self.within("U(1*f) = 0", abs(apply_U(self.sigma, of)), 1e-8))
        err = 0.0
        x = self.grid.nodes
        for _ in range(10):
            while True:
                lam, beta = (complex(self.rng.uniform(-4, 4), self.rng.uniform(-0.5, 0.5)) for _ in range(2))
                if abs(lam - beta) > 0.1:
                    break
            el = GridFunction(self.grid, np.exp(1j * lam * x))
            eb = GridFunction(self.grid, np.exp(1j * beta * x))
            got = E.convolve(el, eb, dg=1j * beta * eb)
            ref = exponential_identity(self.cf, lam, beta, x)
            err = max(err, np.abs(got.values - ref).max() / max(1.0, np.abs(ref).max()))
        out.append(self.within("exponential identity", err, 1e-8))
        return out

    def expansion(self):
        sp = self.spectrum or []
        if not sp:
            return Check("expansion", True, detail="empty spectrum; nothing to expand")
        E, sig, g = self.engine, self.sigma, self.grid
        out = []
        first = sorted(sp, key=lambda ev: (abs(ev.lam), ev.lam.real))[:5]
        bases = [build_root_basis(ev, g, sig) for ev in first]
        chain = 0.0
        indep = 1.0
        for B in bases:
            indep = min(indep, B.independence_ratio())
            for s in range(B.multiplicity - 1):
                u, v = B.functions[s], B.functions[s + 1]
                chain = max(chain, (-1j * differentiate(v) - B.eigenvalue.lam * v - u).sup_norm() / u.sup_norm())
        out.append(self.within("root chain (L - lam) u_{s+1} = u_s", chain, 1e-7))
        out.append(Check("root blocks linearly independent", indep > 1e-8, indep, 1e-8))

        f = self.rand_f()
        pc = idem = orth = 0.0
        projs = []
        for ev, B in zip(first[:3], bases[:3]):
            p = project(E, ev, f, B)
            projs.append((ev, B, p))
            pc = max(pc, (p - project_contour(sig, self.cf, ev, f)).sup_norm() / max(1.0, f.sup_norm()))
            idem = max(idem, (project(E, ev, p, B) - p).sup_norm() / max(1.0, p.sup_norm()))
        for i, (ev, B, p) in enumerate(projs):
            for j, (ev2, B2, p2) in enumerate(projs):
                if i != j:
                    orth = max(orth, project(E, ev, p2, B).sup_norm() / max(1.0, p2.sup_norm()))
        out.append(self.within("projection = contour integral", pc, 1e-7))
        out.append(self.within("projection idempotent", idem, 1e-7))
        out.append(self.within("projections mutually annihilate", orth, 1e-7))

        table = 0.0
        for B in bases:
            m = B.multiplicity
            for p_ in range(m):
                for q_ in range(m):
                    got = E.convolve(B.functions[p_], B.functions[q_], dg=B.derivative(q_))
                    want = B.functions[p_ + q_ - m + 1].values if p_ + q_ >= m - 1 else 0.0
                    table = max(table, np.abs(got.values - want).max())
        out.append(self.within("root product table", table, 1e-6))

        M = biorthogonality_matrix(bases)
        out.append(self.within("biorthogonality matrix = I", np.abs(M - np.eye(len(M))).max(), 1e-6))

        R = self.cfg.radius
        h = self.rand_f()
        fh = fourier_transform(E, sp, f, R)
        hh = fourier_transform(E, sp, h, R)
        fgh = fourier_transform(E, sp, E.convolve(f, h), R)
        out.append(self.within("transform carries * to blockwise Cauchy product",
                               fgh.max_abs_diff(cauchy_convolve(fh, hh)), 1e-6))

        w = self.domain_function()
        ev = first[0]
        Lw = -1j * differentiate(w) - ev.lam * w
        Cw, CL = coefficients(sig, ev, w), coefficients(sig, ev, Lw)
        shift = max(abs(CL[0]), np.abs(CL[1:] - Cw[:-1]).max(initial=0.0))
        out.append(self.within("(L - lam_n) acts as a shift on coefficients", shift, 1e-7))

        q_err = 0.0
        mus = []
        while len(mus) < 3:
            mu = float(self.rng.uniform(0.2, 3.0))
            if min(abs(mu - e.lam) for e in sp) > 0.1:
                mus.append(mu)
        for mu in mus:
            fm = g.sample(lambda s: np.exp(1j * mu * s))
            S = partial_sums(E, sp, fm, [R], method="coefficients")[R]
            q_err = max(q_err, (S - fm - remainder_exp_contour(self.cf, mu, R, g)).sup_norm())
        out.append(self.within("remainder sum form = contour form", q_err, 1e-6))
        return out

    def remainder_decay(self):
        if not (isinstance(self.cfg.sigma, str) and self.cfg.sigma == "antiperiodic"):
            return []
        radii = [10.0, 20.0, 40.0]
        sp = find_spectrum(self.cf, 41.0)
        f = bump_function(self.grid)
        S = partial_sums(self.engine, sp, f, radii, method="coefficients")
        w = [weighted_remainder_norm(S[r] - f) for r in radii]
        ok = w[0] > w[1] > w[2]
        return Check("weighted remainder decreasing at R=10,20,40", ok, w[-1],
                     detail=", ".join(f"{v:.2e}" for v in w))


def run_verification(cfg: RunConfig, label: str | None = None) -> VerifyReport:
    t0 = time.perf_counter()
    s = _Suite(cfg)
    s.run("characteristic", s.characteristic)
    s.run("spectrum", s.spectrum_stage)
    s.run("counting", s.counting)
    s.run("conditions", s.conditions)
    s.run("resolvent", s.resolvent)
    s.run("convolution", s.convolution)
    s.run("expansion", s.expansion)
    s.run("remainder decay", s.remainder_decay)
    name = label or (cfg.sigma if isinstance(cfg.sigma, str) else "custom")
    return VerifyReport(name, s.checks, time.perf_counter() - t0)
