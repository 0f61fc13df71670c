"""The boundary function sigma, the boundary functional U and structural
conditions on sigma.

Every integral against conj(sigma) goes through :meth:`SigmaSpec.rule`, a
Gauss-Legendre rule whose weights already carry conj(sigma(mu)); indicator
presets integrate only over their support so the jump at ``c`` never lands
inside a panel.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError
from .function_space import ChebGrid, GridFunction, Segment, differentiate, gauss_legendre, make_grid, read_csv

SUPPORT_TOL = 1e-12

KINDS = ("zero", "indicator_i", "constant_imag", "linear_imag", "sampled")


class SigmaSpec:
    """Boundary function sigma on [0, b].

    Build with the named constructors; ``kind`` is one of :data:`KINDS`.
    ``linear_imag`` (sigma = i(alpha + gamma x / b)) hosts the shipped
    double-zero fixture.
    """

    def __init__(self, kind: str, segment: Segment, *, c=None, alpha=None, gamma=None,
                 samples: GridFunction | None = None, source: str | None = None):
        if kind not in KINDS:
            raise ConfigurationError(f"unknown sigma kind {kind!r}")
        self.kind = kind
        self.segment = segment
        self.b = segment.b
        self.c = None if c is None else float(c)
        self.alpha = None if alpha is None else float(alpha)
        self.gamma = None if gamma is None else float(gamma)
        self.samples = samples
        self.source = source
        if kind == "indicator_i" and not (0.0 <= self.c <= self.b):
            raise ConfigurationError(f"indicator cut c={c} outside [0, {self.b}]")
        if kind == "sampled":
            if samples is None or not np.all(np.isfinite(samples.values)):
                raise ConfigurationError("sampled sigma needs finite samples")
            if samples.grid.b != self.b:
                raise ConfigurationError("sampled sigma grid does not match segment")

    # -- constructors
    @classmethod
    def zero(cls, b: float) -> "SigmaSpec":
        return cls("zero", Segment(b))

    @classmethod
    def indicator_i(cls, b: float, c: float) -> "SigmaSpec":
        return cls("indicator_i", Segment(b), c=c)

    @classmethod
    def constant_imag(cls, b: float, alpha: float) -> "SigmaSpec":
        return cls("constant_imag", Segment(b), alpha=alpha)

    @classmethod
    def linear_imag(cls, b: float, alpha: float, gamma: float) -> "SigmaSpec":
        return cls("linear_imag", Segment(b), alpha=alpha, gamma=gamma)

    @classmethod
    def sampled(cls, samples: GridFunction, source: str | None = None) -> "SigmaSpec":
        return cls("sampled", samples.segment, samples=samples, source=source)

    def __repr__(self):
        extra = {"indicator_i": f"c={self.c}", "constant_imag": f"alpha={self.alpha}",
                 "linear_imag": f"alpha={self.alpha}, gamma={self.gamma}",
                 "sampled": f"n={self.samples.grid.n}" if self.samples else ""}.get(self.kind, "")
        return f"SigmaSpec({self.kind}, b={self.b}{', ' + extra if extra else ''})"

    @property
    def closed_form(self) -> str | None:
        """Tag of the closed-form characteristic function, if the preset has one."""
        return self.kind if self.kind in ("zero", "indicator_i", "constant_imag") else None

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "zero":
            return np.zeros(x.shape, dtype=complex)
        if self.kind == "indicator_i":
            return np.where(x <= self.c, 1j, 0j)
        if self.kind == "constant_imag":
            return np.full(x.shape, 1j * self.alpha)
        if self.kind == "linear_imag":
            return 1j * (self.alpha + self.gamma * x / self.b)
        return self.samples.grid.interp(self.samples.values, x)

    def rule(self, m: int):
        """Nodes and weights with sum(w * h(nodes)) ~ integral_0^b h conj(sigma)."""
        return _sigma_rule(self._key(), m, self)

    def _key(self):
        if self.kind == "sampled":
            return ("sampled", id(self.samples))
        return (self.kind, self.b, self.c, self.alpha, self.gamma)

    # -- serialization
    def to_json(self) -> dict:
        if self.kind == "zero":
            return {"kind": "zero"}
        if self.kind == "indicator_i":
            return {"kind": "indicator_i", "c": self.c}
        if self.kind == "constant_imag":
            return {"kind": "constant_imag", "alpha": self.alpha}
        if self.kind == "linear_imag":
            return {"kind": "linear_imag", "alpha": self.alpha, "gamma": self.gamma}
        return {"kind": "sampled", "path": self.source}

    @classmethod
    def from_json(cls, obj: dict, b: float, grid: ChebGrid | None = None) -> "SigmaSpec":
        kind = obj.get("kind")
        try:
            if kind == "zero":
                return cls.zero(b)
            if kind == "indicator_i":
                return cls.indicator_i(b, obj["c"])
            if kind == "constant_imag":
                return cls.constant_imag(b, obj["alpha"])
            if kind == "linear_imag":
                return cls.linear_imag(b, obj["alpha"], obj["gamma"])
            if kind == "sampled":
                g = grid if grid is not None else make_grid(b)
                return cls.sampled(read_csv(obj["path"], g), source=obj["path"])
        except KeyError as exc:
            raise ConfigurationError(f"sigma description {obj!r} missing field {exc}") from None
        raise ConfigurationError(f"unknown sigma kind {kind!r}")

    def dumps(self) -> str:
        return json.dumps({"sigma": self.to_json()})

    # -- supports (exact for presets, thresholded for samples)
    def support_extrema(self, tol: float = SUPPORT_TOL):
        """(min supp(sigma - i), max supp(sigma)); None for an empty support."""
        b = self.b
        if self.kind == "zero":
            return 0.0, None
        if self.kind == "constant_imag":
            return (0.0 if self.alpha != 1.0 else None), (b if self.alpha != 0.0 else None)
        if self.kind == "indicator_i":
            lo = self.c if self.c < b else None
            hi = self.c if self.c > 0.0 else None
            return lo, hi
        if self.kind == "linear_imag":
            lo = None if (self.alpha == 1.0 and self.gamma == 0.0) else 0.0
            hi = None if (self.alpha == 0.0 and self.gamma == 0.0) else b
            return lo, hi
        x = self.samples.nodes
        v = self.samples.values
        a = np.nonzero(np.abs(v - 1j) > tol)[0]
        s = np.nonzero(np.abs(v) > tol)[0]
        return (float(x[a[0]]) if a.size else None), (float(x[s[-1]]) if s.size else None)


@lru_cache(maxsize=256)
def _sigma_rule(key, m, sigma):
    b = sigma.b
    if sigma.kind == "zero" or (sigma.kind == "indicator_i" and sigma.c == 0.0):
        empty = np.zeros(0)
        return empty, empty.astype(complex)
    if sigma.kind == "indicator_i":
        r = gauss_legendre(0.0, sigma.c, m)
        return r.nodes, r.weights * (-1j)
    r = gauss_legendre(0.0, b, m)
    return r.nodes, r.weights * np.conj(sigma(r.nodes))


def default_rule_points(grid: ChebGrid) -> int:
    return grid.n


def apply_U(sigma: SigmaSpec, y: GridFunction, m: int | None = None) -> complex:
    """U(y) = y(0) - integral_0^b (-i y'(x)) conj(sigma(x)) dx."""
    if y.grid.b != sigma.b:
        raise ConfigurationError("function and sigma live on different segments")
    mu, cw = sigma.rule(m or default_rule_points(y.grid))
    y0 = complex(y.values[0])
    if mu.size == 0:
        return y0
    dy = y.grid.interp(differentiate(y).values, mu)
    return y0 + 1j * complex(np.dot(cw, dy))


def apply_U_parametric(sigma: SigmaSpec, F: Callable, dF: Callable, grid: ChebGrid,
                       m: int | None = None) -> GridFunction:
    """Apply U in the second argument of F(x, mu) for every grid x.

    ``F(x, mu)`` and ``dF(x, mu)`` (the analytic mu-derivative) must broadcast
    over numpy arrays.
    """
    x = grid.nodes
    out = np.asarray(F(x, np.zeros_like(x)), dtype=complex) * np.ones(grid.n)
    mu, cw = sigma.rule(m or default_rule_points(grid))
    if mu.size:
        d = np.asarray(dF(x[:, None], mu[None, :]), dtype=complex) * np.ones((grid.n, mu.size))
        out = out + 1j * (d @ cw)
    return GridFunction(grid, out)


@dataclass
class ConditionReport:
    """Structural conditions on sigma plus spectral observations.

    ``conminmax_holds`` tests min supp(sigma - i) = 0 and max supp(sigma) = b.
    One statement of the same condition in the source material writes
    sigma + i in the first clause; the sigma - i form is used because it is
    the one consistent with the empty-spectrum preset sigma = i on [0, c].

    The strip bound, separation and multiplicity are observed over the
    supplied finite spectrum (|lambda| <= radius), never claimed as suprema.
    """

    conminmax_holds: bool
    min_supp_sigma_minus_i: float | None
    max_supp_sigma: float | None
    strip_bound: float
    separation: float
    max_multiplicity: int
    radius: float
    n_eigenvalues: int
    vacuous: bool
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        sep = self.separation
        return {
            "conminmax_holds": self.conminmax_holds,
            "min_supp_sigma_minus_i": self.min_supp_sigma_minus_i,
            "max_supp_sigma": self.max_supp_sigma,
            "strip_bound": self.strip_bound,
            "separation": None if not np.isfinite(sep) else sep,
            "max_multiplicity": self.max_multiplicity,
            "observed_over_radius": self.radius,
            "n_eigenvalues": self.n_eigenvalues,
            "vacuous": self.vacuous,
            "notes": list(self.notes),
        }


def check_conditions(sigma: SigmaSpec, spectrum: Sequence, radius: float,
                     support_tol: float = SUPPORT_TOL) -> ConditionReport:
    lo, hi = sigma.support_extrema(support_tol)
    holds = lo is not None and hi is not None and lo == 0.0 and abs(hi - sigma.b) <= support_tol * sigma.b
    lams = np.array([ev.lam for ev in spectrum], dtype=complex)
    notes = [f"strip bound, separation and multiplicity observed over |lambda| <= {radius}"]
    if lams.size == 0:
        notes.append("empty spectrum: strip, separation and multiplicity conditions hold vacuously")
        return ConditionReport(holds, lo, hi, 0.0, float("inf"), 0, float(radius), 0, True, notes)
    strip = float(np.max(np.abs(lams.imag)))
    if lams.size >= 2:
        d = np.abs(lams[:, None] - lams[None, :])
        np.fill_diagonal(d, np.inf)
        sep = float(d.min())
    else:
        sep = float("inf")
    mult = max(int(ev.multiplicity) for ev in spectrum)
    return ConditionReport(holds, lo, hi, strip, sep, mult, float(radius), int(lams.size), False, notes)
