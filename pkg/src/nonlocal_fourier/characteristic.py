"""The characteristic entire function Delta(lambda) = 1 - lambda * integral_0^b
exp(i lambda x) conj(sigma(x)) dx, its lambda-derivatives and G(f; x, lambda)."""
from __future__ import annotations

from math import factorial

import numpy as np

from .boundary import SigmaSpec
from .errors import ConfigurationError, DomainError, RangeError
from .function_space import GridFunction, _leggauss

OVERFLOW_GUARD = 700.0
MAX_DERIVATIVE = 12


def _rule_size(lam_abs_max: float, b: float) -> int:
    m = 0.7 * lam_abs_max * b + 40.0
    return int(16 * np.ceil(m / 16.0))


class CharacteristicFn:
    def __init__(self, sigma: SigmaSpec):
        self.sigma = sigma
        self.segment = sigma.segment
        self.b = sigma.b

    @property
    def closed_form(self):
        return self.sigma.closed_form

    def __repr__(self):
        return f"CharacteristicFn({self.sigma!r})"

    def __call__(self, lam):
        return delta(self, lam)

    def _guard(self, lam):
        if np.any(np.abs(np.imag(lam)) * self.b > OVERFLOW_GUARD):
            raise RangeError(f"|Im lambda| * b exceeds {OVERFLOW_GUARD}; exp overflow")

    def _derivs_closed(self, lam, j):
        s = self.sigma
        if s.kind == "zero":
            return np.ones_like(lam) if j == 0 else np.zeros_like(lam)
        if s.kind == "indicator_i":
            return (1j * s.c) ** j * np.exp(1j * lam * s.c)
        a, b = s.alpha, self.b
        e = a * (1j * b) ** j * np.exp(1j * lam * b)
        return (1.0 - a) + e if j == 0 else e

    def _derivs_quad(self, lam, j):
        lam_max = float(np.max(np.abs(lam))) if lam.size else 0.0
        mu, cw = self.sigma.rule(_rule_size(lam_max, self.b))
        if mu.size == 0:
            return np.ones_like(lam) if j == 0 else np.zeros_like(lam)
        E = np.exp(1j * lam[..., None] * mu)
        # d^j/dlam^j [lam e^{i lam mu}] = ((i mu)^j lam + j (i mu)^{j-1}) e^{i lam mu}
        if j == 0:
            return 1.0 - lam * (E @ cw)
        im = 1j * mu
        poly = im**j * lam[..., None] + j * im ** (j - 1)
        return -((poly * E) @ cw)

    def derivatives(self, lam, j: int, method: str = "auto"):
        lam_a = np.asarray(lam, dtype=complex)
        self._guard(lam_a)
        if method == "closed" or (method == "auto" and self.closed_form):
            if not self.closed_form:
                raise ConfigurationError(f"{self.sigma!r} has no closed form")
            out = self._derivs_closed(lam_a, j)
        elif method in ("auto", "quadrature"):
            out = self._derivs_quad(lam_a, j)
        else:
            raise ConfigurationError(f"unknown method {method!r}")
        out = np.asarray(out, dtype=complex)
        return complex(out) if lam_a.ndim == 0 else out


def delta(cf: CharacteristicFn, lam, method: str = "auto"):
    """Delta(lambda); closed form for presets that have one, quadrature otherwise."""
    return cf.derivatives(lam, 0, method)


def delta_derivative(cf: CharacteristicFn, lam, order: int = 1, method: str = "auto"):
    """j-th lambda-derivative of Delta, differentiated under the integral."""
    if int(order) != order or order < 1 or order > MAX_DERIVATIVE:
        raise ConfigurationError(f"derivative order must be in 1..{MAX_DERIVATIVE}, got {order}")
    return cf.derivatives(lam, int(order), method)


def taylor_coefficients(cf: CharacteristicFn, lam0: complex, count: int):
    """Delta^{(j)}(lam0) / j! for j < count."""
    return np.array([delta(cf, lam0) if j == 0 else delta_derivative(cf, lam0, j) / factorial(j)
                     for j in range(count)])


def running_integral(f: GridFunction, upper, kernel, q: int | None = None):
    """integral_0^{p} kernel(p, xi) f(xi) dxi for every p in ``upper``.

    ``kernel(p, xi)`` broadcasts over arrays of shape (P, q).
    """
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    t, w = _leggauss(q or f.grid.n)
    xi = 0.5 * upper[:, None] * (1.0 + t[None, :])
    fv = f.grid.interp(f.values, xi)
    return 0.5 * upper * ((kernel(upper[:, None], xi) * fv) @ w)


def g_function(cf: CharacteristicFn, f: GridFunction, x, lam):
    """G(f; x, lambda) = i Delta(lambda) integral_0^x f(xi) exp(-i lambda xi) dxi."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > cf.b * (1 + 1e-12)):
        raise DomainError("x outside [0, b]")
    lam = complex(lam)
    I = running_integral(f, np.atleast_1d(xa), lambda p, xi: np.exp(-1j * lam * xi))
    out = 1j * delta(cf, lam) * I
    return complex(out[0]) if xa.ndim == 0 else out
