"""Root functions, spectral projections, coefficient functionals, the
biorthogonal system, the sequence-space transform and partial-sum remainders.

Sign convention
---------------
The spectral projection is P_n f = -(1/2 pi i) closed integral over
|lam - lam_n| = delta of (L - lam)^{-1} f, i.e. minus the residue of
exp(i lam x)/Delta(lam) * f. The root functions therefore carry a factor
``ROOT_SIGN = -1`` in front of sum_j d_j/j! (ix)^{s-j}/(s-j)! exp(i lam_n x):
with it, P_n f = u_{m-1} * f holds as stated, u_{m-1} is idempotent under *,
u_p * u_q follows the nilpotent product table and the transform carries *
to the blockwise Cauchy product. The d_j themselves are the plain Taylor
data of (lam - lam_n)^m / Delta.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import numpy as np

from .boundary import SigmaSpec
from .characteristic import CharacteristicFn, delta, running_integral
from .convolution import ConvolutionEngine
from .errors import ConfigurationError, InvalidEigenvalueError
from .function_space import ChebGrid, GridFunction, bilinear, inner, _leggauss
from .resolvent import apply_resolvent
from .spectrum import Eigenvalue

log = logging.getLogger(__name__)

ROOT_SIGN = -1.0
DIST_MIN = 1e-3


# ------------------------------------------------------------ root functions

def _poly_exp(x, lam, k):
    """(i x)^k / k! exp(i lam x)."""
    return (1j * x) ** k / factorial(k) * np.exp(1j * lam * x)


def _poly_exp_dx(x, lam, k):
    out = 1j * lam * _poly_exp(x, lam, k)
    if k >= 1:
        out = out + 1j * _poly_exp(x, lam, k - 1)
    return out


def root_function(ev: Eigenvalue, s: int, x, derivative: bool = False):
    """u_{s,n}(x) (or its x-derivative) evaluated at arbitrary x."""
    x = np.asarray(x, dtype=float)
    d = ev.taylor
    term = _poly_exp_dx if derivative else _poly_exp
    out = np.zeros(x.shape, dtype=complex)
    for j in range(s + 1):
        out = out + d[j] / factorial(j) * term(x, ev.lam, s - j)
    return ROOT_SIGN * out


@dataclass
class RootBasis:
    """u_{s,n}, s < m_n, on a grid, plus the biorthogonal h_{k,n} when built."""

    eigenvalue: Eigenvalue
    functions: list
    biorthogonal: list = field(default_factory=list)

    @property
    def multiplicity(self):
        return self.eigenvalue.multiplicity

    @property
    def generator(self) -> GridFunction:
        return self.functions[-1]

    def derivative(self, s: int) -> GridFunction:
        g = self.functions[s].grid
        return GridFunction(g, root_function(self.eigenvalue, s, g.nodes, derivative=True))

    def gram(self) -> np.ndarray:
        u = self.functions
        return np.array([[inner(a, b) for b in u] for a in u])

    def independence_ratio(self) -> float:
        """min / max singular value of the block Gram matrix."""
        sv = np.linalg.svd(self.gram(), compute_uv=False)
        return float(sv.min() / sv.max())


def build_root_basis(ev: Eigenvalue, grid: ChebGrid, sigma: SigmaSpec | None = None) -> RootBasis:
    if ev.taylor.size != ev.multiplicity:
        raise InvalidEigenvalueError("Taylor data length must equal multiplicity")
    if ev.multiplicity < 1 or abs(ev.taylor[0]) == 0.0:
        raise InvalidEigenvalueError(f"d_0 vanishes at {ev.lam}; not a valid eigenvalue record")
    funcs = [GridFunction(grid, root_function(ev, s, grid.nodes)) for s in range(ev.multiplicity)]
    basis = RootBasis(ev, funcs)
    if sigma is not None:
        basis.biorthogonal = biorthogonal(sigma, ev, grid, corrected=True)
    return basis


# ----------------------------------------------------------------- projections

def project(engine: ConvolutionEngine, ev: Eigenvalue, f: GridFunction,
            basis: RootBasis | None = None) -> GridFunction:
    """P_n f = u_{m_n - 1, n} * f."""
    basis = basis or build_root_basis(ev, engine.grid)
    u = basis.generator
    return engine.convolve(f, u, dg=basis.derivative(ev.multiplicity - 1))


def project_contour(sigma: SigmaSpec, cf: CharacteristicFn, ev: Eigenvalue, f: GridFunction,
                    radius: float = 0.05, points: int = 64) -> GridFunction:
    """-(1/2 pi i) closed integral of (L - lam)^{-1} f around lam_n (trapezoid rule)."""
    th = 2 * np.pi * (np.arange(points) + 0.5) / points
    e = radius * np.exp(1j * th)
    acc = np.zeros(f.grid.n, dtype=complex)
    for ek in e:
        acc += ek * apply_resolvent(sigma, cf, ev.lam + ek, f).y.values
    return GridFunction(f.grid, -acc / points)


# ----------------------------------------------------- coefficient functionals

_SIGN_REGISTRY: dict = {}


def _literal_coefficients(sigma: SigmaSpec, ev: Eigenvalue, f: GridFunction,
                          rule_points: int | None = None) -> np.ndarray:
    """C_k(f) = -i U_mu { integral_0^mu f(xi) (i(mu - xi))^k/k! exp(i lam_n (mu - xi)) dxi }.

    Phi_k(mu) is the inner integral; Phi_k(0) = 0 and Phi_k' comes from the
    Leibniz rule, so U Phi_k = i * integral Phi_k' conj(sigma).
    """
    grid = f.grid
    mu, cw = sigma.rule(rule_points or grid.n)
    lam = ev.lam
    out = np.zeros(ev.multiplicity, dtype=complex)
    if mu.size == 0:
        return out
    f_mu = grid.interp(f.values, mu)
    for k in range(ev.multiplicity):
        dphi = running_integral(f, mu, lambda p, xi, k=k: _poly_exp_dx(p - xi, lam, k))
        if k == 0:
            dphi = dphi + f_mu
        U = 0.0 + 1j * np.dot(cw, dphi)  # Phi_k(0) = 0
        out[k] = -1j * U
    return out


def _registry_key(sigma, grid):
    return (sigma.kind, sigma.b, sigma.c, sigma.alpha, sigma.gamma,
            id(sigma.samples) if sigma.samples is not None else None, grid.b, grid.n)


def calibrate_coefficient_sign(sigma: SigmaSpec, ev: Eigenvalue, grid: ChebGrid,
                               engine: ConvolutionEngine | None = None, seed: int = 0) -> float:
    """Fit P_n f = sum C_{m-1-k} u_k by least squares on a random f and compare
    with the literal functionals; returns the global sign (+1 or -1)."""
    key = _registry_key(sigma, grid)
    if key in _SIGN_REGISTRY:
        return _SIGN_REGISTRY[key]
    engine = engine or ConvolutionEngine(sigma, grid)
    f = random_smooth(grid, np.random.default_rng(seed))
    basis = build_root_basis(ev, grid)
    pf = project(engine, ev, f, basis)
    U = np.stack([u.values for u in basis.functions], axis=1)
    fit, *_ = np.linalg.lstsq(U, pf.values, rcond=None)
    fitted = fit[::-1]  # coefficient of u_k is C_{m-1-k}
    lit = _literal_coefficients(sigma, ev, f)
    scale = max(np.abs(fitted).max(), 1e-300)
    if np.abs(fitted - lit).max() <= 1e-6 * scale:
        sign = 1.0
    elif np.abs(fitted + lit).max() <= 1e-6 * scale:
        sign = -1.0
        log.warning("coefficient functionals: literal sign disagrees with the expansion; flipping")
    else:
        raise ConfigurationError("coefficient functionals match the projection under neither sign")
    _SIGN_REGISTRY[key] = sign
    return sign


def coefficients(sigma: SigmaSpec, ev: Eigenvalue, f: GridFunction, *,
                 engine: ConvolutionEngine | None = None, calibrate: bool = True) -> np.ndarray:
    """(C_{0,n}(f), ..., C_{m_n - 1, n}(f)); P_n f = sum_k C_{m-1-k} u_k."""
    sign = calibrate_coefficient_sign(sigma, ev, f.grid, engine) if calibrate else 1.0
    return sign * _literal_coefficients(sigma, ev, f)


# ------------------------------------------------------ biorthogonal system

def biorthogonal(sigma: SigmaSpec, ev: Eigenvalue, grid: ChebGrid, corrected: bool = False,
                 q: int | None = None) -> list:
    """h_{k,n}(xi) = integral_xi^b conj(sigma(mu)) d/dmu[(i(mu - xi))^k/k! exp(i lam_n (mu - xi))] dmu.

    The literal functions reproduce C_k only for k >= 1. With
    ``corrected=True`` the k = 0 function gains conj(sigma(xi)), and the
    bilinear pairing integral f h_k equals C_k(f) for every k.
    """
    t, w = _leggauss(q or grid.n)
    xi = grid.nodes
    if sigma.kind == "zero":
        return [grid.constant(0.0) for _ in range(ev.multiplicity)]
    top = np.full(xi.shape, sigma.b)
    if sigma.kind == "indicator_i":
        top = np.maximum(xi, sigma.c)
    half = 0.5 * (top - xi)
    mu = xi[:, None] + half[:, None] * (1 + t[None, :])
    sbar = np.conj(sigma(mu))
    out = []
    for k in range(ev.multiplicity):
        vals = half * ((sbar * _poly_exp_dx(mu - xi[:, None], ev.lam, k)) @ w)
        if corrected and k == 0:
            vals = vals + np.conj(sigma(xi))
        out.append(GridFunction(grid, vals))
    return out


def pairing(f: GridFunction, h: GridFunction) -> complex:
    """Bilinear pairing integral_0^b f h (the convention that realizes C_k)."""
    return bilinear(f, h)


def biorthogonality_matrix(bases: Sequence[RootBasis]) -> np.ndarray:
    """M[(n, k), (m, l)] = <u_{k,n}, h~_{m_m - 1 - l, m}>; identity for a biorthogonal pair."""
    us = [u for B in bases for u in B.functions]
    hs = [B.biorthogonal[B.multiplicity - 1 - k] for B in bases for k in range(B.multiplicity)]
    return np.array([[pairing(u, h) for h in hs] for u in us])


def pairing_convention_report(sigma: SigmaSpec, ev: Eigenvalue, grid: ChebGrid, seed: int = 0) -> dict:
    """Which pairing of h_{k,n} with f reproduces the coefficient functionals."""
    f = random_smooth(grid, np.random.default_rng(seed))
    C = coefficients(sigma, ev, f)
    scale = max(np.abs(C).max(), 1e-300)
    report = {}
    for corrected in (False, True):
        hs = biorthogonal(sigma, ev, grid, corrected=corrected)
        bil = np.array([bilinear(f, h) for h in hs])
        ses = np.array([inner(f, h) for h in hs])
        tag = "with_conj_sigma_term" if corrected else "literal"
        report[f"bilinear_{tag}"] = float(np.abs(bil - C).max() / scale)
        report[f"sesquilinear_{tag}"] = float(np.abs(ses - C).max() / scale)
    report["adopted"] = min((k for k in report), key=report.get)
    return report


# ------------------------------------------------------------- sequence space

@dataclass
class SequenceElement:
    """Blocks (C_0, ..., C_{m_n - 1}) keyed by eigenvalue index."""

    lams: np.ndarray
    blocks: dict
    radius: float

    def __post_init__(self):
        self.lams = np.asarray(self.lams, dtype=complex)

    def _check(self, other):
        if (self.lams.shape != other.lams.shape or np.abs(self.lams - other.lams).max(initial=0) > 1e-8
                or any(self.blocks[k].shape != other.blocks[k].shape for k in self.blocks)):
            raise ConfigurationError("sequence elements live on different spectra")

    def __add__(self, other):
        self._check(other)
        return SequenceElement(self.lams, {k: v + other.blocks[k] for k, v in self.blocks.items()}, self.radius)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c):
        return SequenceElement(self.lams, {k: c * v for k, v in self.blocks.items()}, self.radius)

    __rmul__ = __mul__

    def max_abs_diff(self, other) -> float:
        self._check(other)
        return max((float(np.abs(v - other.blocks[k]).max()) for k, v in self.blocks.items()), default=0.0)

    def l2_norm(self) -> float:
        return float(np.sqrt(sum(np.sum(np.abs(v) ** 2) for v in self.blocks.values())))

    def to_json(self) -> dict:
        return {"radius": self.radius,
                "eigenvalues": {str(k): [self.lams[k].real, self.lams[k].imag] for k in self.blocks},
                "blocks": {str(k): [[float(c.real), float(c.imag)] for c in v] for k, v in self.blocks.items()}}

    @classmethod
    def from_json(cls, obj) -> "SequenceElement":
        keys = sorted(int(k) for k in obj["blocks"])
        lams = np.array([complex(*obj["eigenvalues"][str(k)]) for k in keys])
        blocks = {i: np.array([complex(a, b) for a, b in obj["blocks"][str(k)]]) for i, k in enumerate(keys)}
        return cls(lams, blocks, float(obj["radius"]))


def fourier_transform(engine: ConvolutionEngine, spectrum: Sequence[Eigenvalue], f: GridFunction,
                      R: float) -> SequenceElement:
    """f^ restricted to |lam_n| <= R."""
    sel = [ev for ev in spectrum if abs(ev.lam) <= R]
    blocks = {i: coefficients(engine.sigma, ev, f, engine=engine) for i, ev in enumerate(sel)}
    return SequenceElement(np.array([ev.lam for ev in sel]), blocks, float(R))


def cauchy_convolve(a: SequenceElement, b: SequenceElement) -> SequenceElement:
    """Blockwise Cauchy product truncated at the block length."""
    a._check(b)
    blocks = {k: np.convolve(v, b.blocks[k])[: v.size] for k, v in a.blocks.items()}
    return SequenceElement(a.lams, blocks, a.radius)


# ---------------------------------------------------------- partial sums

def safe_radius(spectrum: Sequence[Eigenvalue], R: float, dist_min: float = DIST_MIN) -> float:
    """R, nudged outward when an eigenvalue sits within ``dist_min`` of |lam| = R."""
    r = float(R)
    for _ in range(100):
        close = [abs(ev.lam) for ev in spectrum if abs(abs(ev.lam) - r) < dist_min]
        if not close:
            return r
        r = max(close) + 2 * dist_min
    return r


def _project_by_coefficients(engine, ev, f):
    C = coefficients(engine.sigma, ev, f, engine=engine)
    m = ev.multiplicity
    vals = sum(C[m - 1 - k] * root_function(ev, k, f.grid.nodes) for k in range(m))
    return GridFunction(f.grid, vals)


def partial_sums(engine: ConvolutionEngine, spectrum: Sequence[Eigenvalue], f: GridFunction,
                 radii: Sequence[float], method: str = "convolution") -> dict:
    """{R: S_R f} with S_R f = sum over |lam_n| < R of P_n f (projections shared across radii).

    ``method="coefficients"`` builds each P_n f as sum_k C_{m-1-k}(f) u_k,
    which skips the O(n^3) convolution.
    """
    if method not in ("convolution", "coefficients"):
        raise ConfigurationError(f"unknown partial-sum method {method!r}")
    proj = project if method == "convolution" else _project_by_coefficients
    out = {}
    radii_ok = []
    for R in radii:
        r = safe_radius(spectrum, R)
        if r != R:
            warnings.warn(f"eigenvalue within {DIST_MIN} of |lambda| = {R}; using R = {r}", stacklevel=2)
        radii_ok.append((R, r))
    rmax = max(r for _, r in radii_ok)
    projs = [(abs(ev.lam), proj(engine, ev, f)) for ev in spectrum if abs(ev.lam) < rmax]
    for R, r in radii_ok:
        acc = np.zeros(f.grid.n, dtype=complex)
        for m, p in projs:
            if m < r:
                acc += p.values
        out[R] = GridFunction(f.grid, acc)
    return out


def partial_sum(engine, spectrum, f, R, method: str = "convolution") -> GridFunction:
    return partial_sums(engine, spectrum, f, [R], method)[R]


def remainder(engine, spectrum, f, R, method: str = "convolution") -> GridFunction:
    """Q_R f = S_R f - f."""
    return partial_sum(engine, spectrum, f, R, method) - f


def bump_function(grid: ChebGrid) -> GridFunction:
    """sin^2(pi x / b): the smooth bump used for the remainder-decay proxy."""
    return grid.sample(lambda x: np.sin(np.pi * x / grid.b) ** 2)


def remainder_exp_contour(cf: CharacteristicFn, mu: complex, R: float, grid: ChebGrid,
                          points: int = 1024) -> GridFunction:
    """Q_R(exp(i mu x); x) = Delta(mu)/(2 pi i) closed integral over |lam| = R of
    exp(i lam x)/Delta(lam) dlam/(mu - lam)."""
    th = 2 * np.pi * (np.arange(points) + 0.5) / points
    lam = R * np.exp(1j * th)
    weight = lam / (delta(cf, lam) * (mu - lam)) / points
    vals = np.exp(1j * np.outer(grid.nodes, lam)) @ weight
    return GridFunction(grid, delta(cf, mu) * vals)


def weighted_remainder_norm(Q: GridFunction) -> float:
    """max over the grid of |sqrt(x (b - x)) Q(x)|."""
    x = Q.grid.nodes
    return float(np.max(np.sqrt(np.clip(x * (Q.grid.b - x), 0, None)) * np.abs(Q.values)))


# ------------------------------------------------------------ diagnostics

def random_smooth(grid: ChebGrid, rng: np.random.Generator, terms: int = 4, band: float = 4.0) -> GridFunction:
    """Random trigonometric-exponential sum with |frequency| <= band."""
    k = rng.uniform(-band, band, terms)
    c = (rng.normal(size=terms) + 1j * rng.normal(size=terms)) / 2
    return grid.sample(lambda x: np.exp(1j * np.outer(x, k)) @ c)


def muckenhoupt_proxy(cf: CharacteristicFn, max_centers: int = 512, points: int = 32) -> dict:
    """Sup over a finite dyadic family of real intervals I of
    (mean_I |Delta|^2)(mean_I |Delta|^-2). Observational only."""
    b = cf.b
    t, w = _leggauss(points)
    L, Lmax = b / 32.0, 32.0 * np.pi / b
    lo, hi = -64.0 * np.pi / b, 64.0 * np.pi / b
    best = (0.0, None)
    while L <= Lmax * (1 + 1e-12):
        centers = np.arange(lo, hi + 1e-12, L / 2)
        if centers.size > max_centers:
            centers = np.linspace(lo, hi, max_centers)
        lam = centers[:, None] + 0.5 * L * t[None, :]
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            om = np.abs(delta(cf, lam.astype(complex))) ** 2
            q = (0.5 * (om @ w)) * (0.5 * ((1.0 / om) @ w))
        q = np.where(np.isfinite(q), q, np.inf)
        i = int(np.argmax(q))
        if q[i] > best[0]:
            best = (float(q[i]), (float(centers[i] - L / 2), float(centers[i] + L / 2)))
        L *= 2
    return {"sup_quotient": best[0], "worst_interval": best[1], "label": "finite dyadic family proxy"}


def riesz_diagnostics(engine: ConvolutionEngine, cf: CharacteristicFn, spectrum: Sequence[Eigenvalue],
                      R: float, seed: int = 0, samples: int = 4) -> dict:
    """Coefficient l2 / L2 ratio, Muckenhoupt quotient and Gram conditioning (proxies)."""
    grid = engine.grid
    sel = [ev for ev in spectrum if abs(ev.lam) <= R]
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(samples):
        f = random_smooth(grid, rng)
        fh = fourier_transform(engine, sel, f, R)
        ratios.append(fh.l2_norm() / f.l2_norm())
    us = [u for ev in sel for u in build_root_basis(ev, grid).functions]
    gram_cond = None
    if us:
        U = np.stack([u.values / u.l2_norm() for u in us], axis=1)
        G = U.conj().T @ (grid.weights[:, None] * U)
        ev_g = np.linalg.eigvalsh(0.5 * (G + G.conj().T))
        gram_cond = float(ev_g.max() / ev_g.min()) if ev_g.min() > 0 else float("inf")
    return {"coefficient_ratio_max": max(ratios) if ratios else 0.0,
            "coefficient_ratios": ratios,
            "muckenhoupt": muckenhoupt_proxy(cf),
            "gram_condition": gram_cond,
            "radius": float(R), "n_eigenvalues": len(sel)}
