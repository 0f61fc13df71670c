"""Boundary-dependent convolution f * g = i U_mu { integral_mu^x f(xi) g(x + mu - xi) dxi }.

The mu-derivative inside U is taken analytically (Leibniz):
d/dmu F(x, mu) = -f(mu) g(x) + integral_mu^x f(xi) g'(x + mu - xi) dxi,
with g' from the collocation derivative of g. The double integral is the
O(n^2 q) kernel in :mod:`nonlocal_fourier._kernels`.
"""
from __future__ import annotations

from math import factorial

import numpy as np

from . import _kernels
from .boundary import SigmaSpec
from .characteristic import CharacteristicFn, delta, delta_derivative
from .errors import ConfigurationError, SingularResolventError
from .function_space import ChebGrid, GridFunction, _leggauss, differentiate

SINGULAR_FACTOR = 1e3


class ConvolutionEngine:
    """Convolution on one grid for one sigma.

    ``inner_points``: Gauss points for each xi-integral over [mu, x];
    ``outer_points``: size of the sigma rule for the mu-integral.
    """

    def __init__(self, sigma: SigmaSpec, grid: ChebGrid, inner_points: int | None = None,
                 outer_points: int | None = None):
        if grid.b != sigma.b:
            raise ConfigurationError("sigma and grid live on different segments")
        self.sigma = sigma
        self.grid = grid
        self.segment = grid.segment
        self.inner_points = int(inner_points or max(32, grid.n // 2 + 16))
        self.outer_points = int(outer_points or max(32, grid.n // 2 + 16))
        self._tq, self._wq = _leggauss(self.inner_points)

    def __repr__(self):
        return (f"ConvolutionEngine({self.sigma!r}, {self.grid!r}, q={self.inner_points}, "
                f"m={self.outer_points})")

    def _circ(self, xs, ts, fvals, gvals):
        g = self.grid
        return _kernels.circ_matrix(xs, ts, g.nodes, g.bary_weights, fvals, gvals, self._tq, self._wq)

    def _check(self, *fs):
        for f in fs:
            if f.grid != self.grid:
                raise ConfigurationError(f"function on {f.grid}, engine on {self.grid}")

    def circ(self, f: GridFunction, g: GridFunction, x, t):
        """(g o f)(x, t) = integral_t^x g(x + t - xi) f(xi) dxi (signed for t > x)."""
        self._check(f, g)
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        xs, ts = np.broadcast_arrays(xs, ts)
        b = self.grid.b
        if np.any((xs < 0) | (xs > b) | (ts < 0) | (ts > b)):
            raise ConfigurationError("circ arguments must lie in [0, b]")
        out = np.array([self._circ(np.array([xi]), np.array([ti]), f.values, g.values)[0, 0]
                        for xi, ti in zip(xs.ravel(), ts.ravel())]).reshape(xs.shape)
        return complex(out.reshape(-1)[0]) if np.ndim(x) == 0 and np.ndim(t) == 0 else out

    def convolve(self, f: GridFunction, g: GridFunction, dg: GridFunction | None = None) -> GridFunction:
        """f * g sampled on the grid; ``dg`` overrides the collocation derivative of g."""
        self._check(f, g)
        x = self.grid.nodes
        A = self._circ(x, np.zeros(1), f.values, g.values)[:, 0]
        out = 1j * A
        mu, cw = self.sigma.rule(self.outer_points)
        if mu.size:
            gp = differentiate(g) if dg is None else dg
            self._check(gp)
            B = self._circ(x, mu, f.values, gp.values)
            f_mu = self.grid.interp(f.values, mu)
            dF = B - g.values[:, None] * f_mu[None, :]
            out = out - dF @ cw
        return GridFunction(self.grid, out)

    def exp_kernel(self, cf: CharacteristicFn, lam: complex, tol_zero: float = 1e-11) -> GridFunction:
        """exp(i lam x) / Delta(lam) on the grid."""
        d = delta(cf, lam)
        if abs(d) <= SINGULAR_FACTOR * tol_zero:
            from .spectrum import nearest_eigenvalue

            near = nearest_eigenvalue(cf, lam)
            raise SingularResolventError(f"Delta({lam}) = {d:.3g}: lambda is on the spectrum (near {near})",
                                         lam=lam, nearest=near)
        return self.grid.sample(lambda s: np.exp(1j * lam * s) / d)


def circ(engine: ConvolutionEngine, f, g, x, t):
    return engine.circ(f, g, x, t)


def convolve(engine: ConvolutionEngine, f: GridFunction, g: GridFunction) -> GridFunction:
    return engine.convolve(f, g)


def convolve_resolvent_form(engine: ConvolutionEngine, cf: CharacteristicFn, lam: complex,
                            f: GridFunction, tol_zero: float = 1e-11) -> GridFunction:
    """(L - lam)^{-1} f written as exp(i lam x)/Delta(lam) * f."""
    e = engine.exp_kernel(cf, lam, tol_zero)
    return engine.convolve(f, e, dg=GridFunction(engine.grid, 1j * lam * e.values))


def exponential_identity(cf: CharacteristicFn, lam: complex, beta: complex, x) -> np.ndarray:
    """Closed form of exp(i lam x) * exp(i beta x):

    (exp(i beta x) Delta(lam) - exp(i lam x) Delta(beta)) / (beta - lam),
    switching to a Taylor expansion of the quotient about lam when
    |beta - lam| < 1e-3.
    """
    x = np.asarray(x, dtype=float)
    h = beta - lam
    if abs(h) >= 1e-3:
        return (np.exp(1j * beta * x) * delta(cf, lam) - np.exp(1j * lam * x) * delta(cf, beta)) / h
    e = np.exp(1j * lam * x)
    d0 = delta(cf, lam)
    out = np.zeros(x.shape, dtype=complex)
    for k in range(1, 7):
        nk = (1j * x) ** k * e * d0 - e * delta_derivative(cf, lam, k)
        out += nk * h ** (k - 1) / factorial(k)
    return out
