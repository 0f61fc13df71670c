"""Functions on [0, b]: Chebyshev-Lobatto grids, barycentric interpolation,
collocation differentiation and Clenshaw-Curtis / Gauss-Legendre quadrature."""
from __future__ import annotations

import csv
import io
import sys
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np

from . import _kernels
from .errors import ConfigurationError, DomainError

DEFAULT_NODES = 128
MIN_NODES = 8


@dataclass(frozen=True)
class Segment:
    b: float

    def __post_init__(self):
        b = float(self.b)
        if not np.isfinite(b) or b <= 0.0:
            raise ConfigurationError(f"segment length must be positive and finite, got {self.b!r}")
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    def __call__(self, values) -> complex:
        return complex(np.dot(self.weights, values))


@lru_cache(maxsize=64)
def _leggauss(q: int):
    t, w = np.polynomial.legendre.leggauss(q)
    t = 0.5 * (t - t[::-1])  # exact reflection symmetry
    w = 0.5 * (w + w[::-1])
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_legendre(a: float, b: float, q: int) -> QuadratureRule:
    """q-point Gauss-Legendre rule on [a, b]; exact to degree 2q-1."""
    if q < 1:
        raise ConfigurationError("quadrature needs at least one point")
    t, w = _leggauss(q)
    h = 0.5 * (b - a)
    return QuadratureRule(a + h * (1.0 + t), h * w, 2 * q - 1)


def _clenshaw_curtis_weights(n_intervals: int) -> np.ndarray:
    N = n_intervals
    theta = np.pi * np.arange(N + 1) / N
    w = np.zeros(N + 1)
    ii = np.arange(1, N)
    v = np.ones(N - 1)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N**2 - 1)
        for k in range(1, N // 2):
            v -= 2.0 * np.cos(2 * k * theta[ii]) / (4 * k**2 - 1)
        v -= np.cos(N * theta[ii]) / (N**2 - 1)
    else:
        w[0] = w[N] = 1.0 / N**2
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * theta[ii]) / (4 * k**2 - 1)
    w[ii] = 2.0 * v / N
    return w


class ChebGrid:
    """Chebyshev-Gauss-Lobatto nodes mapped to [0, b], in increasing order.

    Instances are cached per (b, n) by :func:`make_grid`, so grid identity
    doubles as the "same node family" check.
    """

    def __init__(self, b: float, n: int):
        self.segment = Segment(b)
        self.b = self.segment.b
        self.n = int(n)
        N = self.n - 1
        self._theta = 0.5 * np.pi * np.arange(self.n) / N
        x = self.b * np.sin(self._theta) ** 2
        x[0], x[-1] = 0.0, self.b
        x.setflags(write=False)
        self.nodes = x
        bw = (-1.0) ** np.arange(self.n)
        bw[0] *= 0.5
        bw[-1] *= 0.5
        bw.setflags(write=False)
        self.bary_weights = bw

    def __repr__(self):
        return f"ChebGrid(b={self.b!r}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, ChebGrid) and self.b == other.b and self.n == other.n

    def __hash__(self):
        return hash((self.b, self.n))

    @cached_property
    def diff_matrix(self) -> np.ndarray:
        th = self._theta
        # x_i - x_j via product formula to avoid cancellation
        dx = self.b * np.sin(th[:, None] + th[None, :]) * np.sin(th[:, None] - th[None, :])
        np.fill_diagonal(dx, 1.0)
        w = self.bary_weights
        D = (w[None, :] / w[:, None]) / dx
        np.fill_diagonal(D, 0.0)
        np.fill_diagonal(D, -D.sum(axis=1))
        D.setflags(write=False)
        return D

    @cached_property
    def weights(self) -> np.ndarray:
        w = 0.5 * self.b * _clenshaw_curtis_weights(self.n - 1)
        w.setflags(write=False)
        return w

    @property
    def quadrature(self) -> QuadratureRule:
        return QuadratureRule(self.nodes, self.weights, self.n - 1)

    def sample(self, func: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        vals = np.asarray(func(self.nodes), dtype=np.complex128)
        if vals.ndim == 0:
            vals = np.full(self.n, complex(vals))
        return GridFunction(self, vals)

    def constant(self, c: complex = 1.0) -> "GridFunction":
        return GridFunction(self, np.full(self.n, complex(c)))

    def interp(self, values, points) -> np.ndarray:
        """Evaluate the interpolant of ``values`` (n,) or (n, k) at ``points``."""
        return _kernels.bary_eval(points, self.nodes, self.bary_weights, values)


@lru_cache(maxsize=32)
def _grid_cache(b: float, n: int) -> ChebGrid:
    return ChebGrid(b, n)


def make_grid(segment: Segment | float, n: int = DEFAULT_NODES) -> ChebGrid:
    b = segment.b if isinstance(segment, Segment) else Segment(segment).b
    if int(n) != n or n < MIN_NODES:
        raise ConfigurationError(f"grid needs at least {MIN_NODES} nodes, got {n}")
    return _grid_cache(b, int(n))


class GridFunction:
    """Complex samples at the nodes of a :class:`ChebGrid`."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: ChebGrid, values):
        vals = np.array(values, dtype=np.complex128)
        if vals.shape != (grid.n,):
            raise ConfigurationError(f"expected {grid.n} samples, got shape {vals.shape}")
        vals.setflags(write=False)
        self.grid = grid
        self.values = vals

    @property
    def nodes(self):
        return self.grid.nodes

    @property
    def segment(self):
        return self.grid.segment

    def __repr__(self):
        return f"GridFunction({self.grid!r}, sup={self.sup_norm():.3g})"

    def _check(self, other: "GridFunction"):
        if self.grid != other.grid:
            raise ConfigurationError(f"node families differ: {self.grid} vs {other.grid}")

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.values + other.values)
        return GridFunction(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.values - other.values)
        return GridFunction(self.grid, self.values - other)

    def __rsub__(self, other):
        return GridFunction(self.grid, other - self.values)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.values * other.values)
        return GridFunction(self.grid, self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return GridFunction(self.grid, self.values / c)

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def conj(self) -> "GridFunction":
        return GridFunction(self.grid, np.conj(self.values))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def l2_norm(self) -> float:
        return float(np.sqrt(max(np.dot(self.grid.weights, np.abs(self.values) ** 2), 0.0)))


def evaluate(f: GridFunction, x):
    """Barycentric interpolation of ``f`` at ``x`` (scalar or array) in [0, b]."""
    b = f.grid.b
    xa = np.asarray(x, dtype=np.float64)
    slack = 1e-12 * b
    if np.any(xa < -slack) or np.any(xa > b + slack) or not np.all(np.isfinite(xa)):
        raise DomainError(f"evaluation point outside [0, {b}]")
    xa = np.clip(xa, 0.0, b)
    out = f.grid.interp(f.values, xa)
    if np.ndim(x) == 0:
        return complex(out)
    return out


def differentiate(f: GridFunction) -> GridFunction:
    return GridFunction(f.grid, f.grid.diff_matrix @ f.values)


def integrate(f: GridFunction) -> complex:
    return complex(np.dot(f.grid.weights, f.values))


def inner(f: GridFunction, g: GridFunction) -> complex:
    """L2 pairing: integral of f * conj(g) over [0, b]."""
    f._check(g)
    return complex(np.dot(f.grid.weights, f.values * np.conj(g.values)))


def bilinear(f: GridFunction, g: GridFunction) -> complex:
    """Integral of f * g over [0, b], no conjugation."""
    f._check(g)
    return complex(np.dot(f.grid.weights, f.values * g.values))


# ------------------------------------------------------------------ CSV files

def write_csv(f: GridFunction, path) -> None:
    """Write ``x,re,im`` rows; ``path == '-'`` streams to stdout."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "re", "im"])
    for x, v in zip(f.nodes, f.values):
        w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])
    _emit(buf.getvalue(), path)


def _emit(text: str, path) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_samples(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or set(rows[0]) != {"x", "re", "im"}:
        raise ConfigurationError(f"{path}: expected header x,re,im")
    try:
        x = np.array([float(r["x"]) for r in rows])
        v = np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    if x.size < 2 or np.any(np.diff(x) <= 0):
        raise ConfigurationError(f"{path}: rows must be sorted by strictly increasing x")
    return x, v


def read_csv(path, grid: ChebGrid) -> GridFunction:
    """Load samples and resample them onto ``grid``.

    Samples that already sit on a Chebyshev-Lobatto family over [0, b] are
    interpolated barycentrically (exact round trip); anything else goes
    through a cubic spline.
    """
    x, v = read_samples(path)
    if abs(x[0]) > 1e-12 * grid.b or abs(x[-1] - grid.b) > 1e-9 * grid.b:
        raise ConfigurationError(f"{path}: samples must span [0, {grid.b}]")
    if x.size >= MIN_NODES:
        src = make_grid(grid.b, x.size)
        if np.allclose(src.nodes, x, rtol=0, atol=1e-12 * grid.b):
            if src == grid:
                return GridFunction(grid, v)
            return GridFunction(grid, src.interp(v, grid.nodes))
    from scipy.interpolate import CubicSpline

    re = CubicSpline(x, v.real)(grid.nodes)
    im = CubicSpline(x, v.imag)(grid.nodes)
    return GridFunction(grid, re + 1j * im)
