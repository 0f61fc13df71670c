"""Explicit resolvent (L - lambda)^{-1} and the operator L = -i d/dx."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .boundary import SigmaSpec, apply_U
from .characteristic import CharacteristicFn, delta, running_integral
from .errors import DomainWarning, SingularResolventError
from .function_space import GridFunction, differentiate

TOL_ZERO = 1e-11
TOL_BOUNDARY = 1e-8
SINGULAR_FACTOR = 1e3


@dataclass
class ResolventResult:
    y: GridFunction
    lam: complex
    residual_ode: float
    residual_boundary: float

    def accepted(self, f: GridFunction, tol: float = 1e-8) -> bool:
        fn = f.sup_norm()
        return (self.residual_ode < tol * (1 + abs(self.lam)) * fn
                and self.residual_boundary < tol * fn)


def apply_resolvent(sigma: SigmaSpec, cf: CharacteristicFn, lam: complex, f: GridFunction,
                    *, tol_zero: float = TOL_ZERO, rule_points: int | None = None) -> ResolventResult:
    """y = i K_lam f + exp(i lam x)/Delta(lam) * (int f conj(sigma) + i lam int conj(sigma) K_lam f),

    where K_lam f(x) = integral_0^x exp(i lam (x - xi)) f(xi) dxi, each one by
    a Gauss rule mapped to [0, x].
    """
    lam = complex(lam)
    d = delta(cf, lam)
    if abs(d) <= SINGULAR_FACTOR * tol_zero:
        from .spectrum import nearest_eigenvalue

        near = nearest_eigenvalue(cf, lam)
        raise SingularResolventError(f"Delta({lam}) = {d:.3g}; lambda is an eigenvalue (near {near})",
                                     lam=lam, nearest=near)
    grid = f.grid
    kern = lambda p, xi: np.exp(1j * lam * (p - xi))  # noqa: E731
    Kx = running_integral(f, grid.nodes, kern)
    mu, cw = sigma.rule(rule_points or grid.n)
    c = 0j
    if mu.size:
        Kmu = running_integral(f, mu, kern)
        f_mu = grid.interp(f.values, mu)
        c = (np.dot(cw, f_mu) + 1j * lam * np.dot(cw, Kmu)) / d
    y = GridFunction(grid, 1j * Kx + c * np.exp(1j * lam * grid.nodes))
    res = -1j * differentiate(y).values - lam * y.values - f.values
    return ResolventResult(y, lam, float(np.max(np.abs(res))), abs(apply_U(sigma, y)))


def apply_L(sigma: SigmaSpec, y: GridFunction, tol_boundary: float = TOL_BOUNDARY) -> GridFunction:
    """-i y'; warns (DomainWarning) when U(y) != 0, i.e. y is outside D(L)."""
    u = apply_U(sigma, y)
    if abs(u) >= tol_boundary * max(y.sup_norm(), 1e-300):
        warnings.warn(f"U(y) = {u:.3g}: function is not in the domain of L", DomainWarning, stacklevel=2)
    return -1j * differentiate(y)
