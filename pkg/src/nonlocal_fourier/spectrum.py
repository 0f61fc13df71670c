"""Zeros of Delta with multiplicities: argument-principle counting, rectangle
subdivision, Newton refinement and Taylor data of (lambda - lambda_n)^m / Delta."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import numpy as np

from .characteristic import CharacteristicFn, delta, delta_derivative
from .errors import ContourError, ConvergenceError
from .function_space import _leggauss

log = logging.getLogger(__name__)

TOL_ZERO = 1e-11
ROUNDING_RESIDUAL = 0.25
CONTOUR_POINTS = 256
MAX_ITER = 60
_SPLIT_JITTER = (0.0137, -0.0213, 0.0379, -0.0461, 0.0593, -0.0719, 0.1031)


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float
    points: int = CONTOUR_POINTS

    @property
    def scale(self):
        return self.radius


@dataclass(frozen=True)
class Rectangle:
    x0: float
    x1: float
    y0: float
    y1: float
    points: int = 16  # Gauss points per panel

    @property
    def center(self):
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    @property
    def size(self):
        return max(self.x1 - self.x0, self.y1 - self.y0)

    def contains(self, z, pad=0.0):
        return (self.x0 - pad <= z.real <= self.x1 + pad) and (self.y0 - pad <= z.imag <= self.y1 + pad)

    def split(self, fx=0.5, fy=0.5):
        xm = self.x0 + fx * (self.x1 - self.x0)
        ym = self.y0 + fy * (self.y1 - self.y0)
        p = self.points
        return [Rectangle(self.x0, xm, self.y0, ym, p), Rectangle(xm, self.x1, self.y0, ym, p),
                Rectangle(self.x0, xm, ym, self.y1, p), Rectangle(xm, self.x1, ym, self.y1, p)]

    def as_list(self):
        return [self.x0, self.x1, self.y0, self.y1]


@dataclass
class Eigenvalue:
    """One spectral point: lambda_n, multiplicity m_n and d_{j,n}, j < m_n.

    d_{j,n} is j! times the j-th Taylor coefficient of (lambda - lambda_n)^m / Delta.
    """

    lam: complex
    multiplicity: int
    taylor: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def __post_init__(self):
        self.lam = complex(self.lam)
        self.taylor = np.asarray(self.taylor, dtype=complex)

    def to_json(self):
        return {"re": self.lam.real, "im": self.lam.imag, "multiplicity": int(self.multiplicity),
                "d": [[float(d.real), float(d.imag)] for d in self.taylor]}

    @classmethod
    def from_json(cls, obj):
        return cls(complex(obj["re"], obj["im"]), int(obj["multiplicity"]),
                   np.array([complex(a, b) for a, b in obj["d"]]))


# ------------------------------------------------------------- contour rules

def _contour_rule(contour, level: int, b: float):
    """(nodes, dlam weights) with sum(w * h(nodes)) ~ closed integral of h."""
    if isinstance(contour, Circle):
        N = max(contour.points, int(8 * np.ceil(contour.radius * b)))
        N *= 2**level
        th = 2 * np.pi * np.arange(N) / N
        e = contour.radius * np.exp(1j * th)
        return contour.center + e, (2j * np.pi / N) * e
    t, w = _leggauss(contour.points)
    corners = [complex(contour.x0, contour.y0), complex(contour.x1, contour.y0),
               complex(contour.x1, contour.y1), complex(contour.x0, contour.y1)]
    nodes, weights = [], []
    for a, c in zip(corners, corners[1:] + corners[:1]):
        L = abs(c - a)
        panels = int(np.ceil(2.0 * L * b)) + 1
        panels *= 2**level
        edges = np.linspace(0.0, 1.0, panels + 1)
        s = (edges[:-1, None] + 0.5 * (edges[1:] - edges[:-1])[:, None] * (1 + t[None, :])).ravel()
        ws = (0.5 * (edges[1:] - edges[:-1])[:, None] * w[None, :]).ravel()
        nodes.append(a + (c - a) * s)
        weights.append((c - a) * ws)
    return np.concatenate(nodes), np.concatenate(weights)


def _log_derivative(cf, lam):
    return delta_derivative(cf, lam, 1) / delta(cf, lam)


def contour_moments(cf: CharacteristicFn, contour, powers=(0,), level: int = 0):
    """(1/2 pi i) closed integral of (lam - center)^k Delta'/Delta for each k."""
    z, w = _contour_rule(contour, level, cf.b)
    ld = _log_derivative(cf, z)
    c = contour.center
    return np.array([np.sum(w * ld * (z - c) ** k) / (2j * np.pi) for k in powers])


def count_zeros(cf: CharacteristicFn, contour, max_level: int = 3) -> int:
    """Argument-principle zero count inside ``contour``.

    The integral is evaluated at two successive resolutions; both must
    round to the same integer with residual below 0.25.
    """
    prev = None
    for level in range(max_level + 1):
        with np.errstate(all="ignore"):
            val = contour_moments(cf, contour, (0,), level)[0]
        if not np.isfinite(val):
            raise ContourError(f"non-finite winding integral on {contour}")
        k = int(np.rint(val.real))
        ok = abs(val - k) < ROUNDING_RESIDUAL
        if ok and prev == k:
            return k
        prev = k if ok else None
    raise ContourError(f"argument-principle count did not settle on {contour} (last value {val:.6g})")


# ------------------------------------------------------------ localization

def _newton(cf, z, order, box, tol_zero, max_iter):
    """Newton on Delta^{(order)}, which has a simple zero at an (order+1)-fold zero."""
    f = (lambda s: delta(cf, s)) if order == 0 else (lambda s: delta_derivative(cf, s, order))
    for _ in range(max_iter):
        fz = f(z)
        dz = fz / delta_derivative(cf, z, order + 1)
        z = z - dz
        if not np.isfinite(z):
            break
        if abs(dz) <= 4e-16 * max(1.0, abs(z)):
            break
    scale = max(1.0, abs(delta_derivative(cf, z, 1))) if order == 0 else 1.0
    if not np.isfinite(z) or abs(delta(cf, z)) >= tol_zero * scale or not box.contains(z, pad=0.1 * box.size):
        raise ConvergenceError(f"Newton refinement failed in box {box.as_list()}", box=box.as_list())
    return complex(z)


def _locate(cf, box, n, out, cluster_size):
    stack = [(box, n)]
    while stack:
        box, n = stack.pop()
        if n == 0:
            continue
        if n == 1 or box.size < cluster_size:
            out.append((box, n))
            continue
        s = contour_moments(cf, box, (1, 2))
        c = s[0] / n
        spread = s[1] / n - c**2
        if abs(spread) < 1e-12 * max(1.0, box.size) ** 2:
            out.append((box, n))
            continue
        for fx, fy in ((0.5 + e, 0.5 - 0.7 * e) for e in _SPLIT_JITTER):
            kids = box.split(fx, fy)
            try:
                counts = [count_zeros(cf, k) for k in kids]
            except ContourError:
                continue
            if sum(counts) == n:
                stack.extend(zip(kids, counts))
                break
        else:
            raise ConvergenceError(f"could not subdivide box {box.as_list()} holding {n} zeros",
                                   box=box.as_list())


def _taylor_data(cf, lam, m, radius, points=CONTOUR_POINTS):
    th = 2 * np.pi * np.arange(points) / points
    e = radius * np.exp(1j * th)
    phi = e**m / delta(cf, lam + e)
    return np.array([factorial(j) * np.mean(phi * e ** (-j)) for j in range(m)])


def _initial_box(R, b, attempt):
    h = max(0.5, 0.05 * R) * (1.0 + 0.173 * attempt)
    H = R + h
    ox, oy = 0.00731 * (1 + attempt), 0.00419 * (1 + attempt)
    return Rectangle(-H + ox, H + ox, -H + oy, H + oy)


def find_spectrum(cf: CharacteristicFn, R: float, *, tol_zero: float = TOL_ZERO,
                  max_iter: int = MAX_ITER, granularity: int = 1,
                  contour_points: int = CONTOUR_POINTS) -> list[Eigenvalue]:
    """All zeros of Delta with |lambda| <= R, sorted by (Re, Im).

    The search runs over a square a little larger than the disk so zeros
    sitting exactly on |lambda| = R are still enclosed; the final list is
    cross-checked against a circle count between R and the next zero out.
    """
    if R <= 0:
        raise ValueError("radius must be positive")
    for attempt in range(4):
        box = _initial_box(R, cf.b, attempt)
        try:
            total = count_zeros(cf, box)
            boxes = [box]
            if granularity > 1:
                fr = np.linspace(0, 1, granularity + 1)
                fr[1:-1] += 0.0113
                xs = box.x0 + fr * (box.x1 - box.x0)
                ys = box.y0 + fr * (box.y1 - box.y0)
                boxes = [Rectangle(xs[i], xs[i + 1], ys[j], ys[j + 1], box.points)
                         for i in range(granularity) for j in range(granularity)]
            counts = [count_zeros(cf, bx) for bx in boxes]
            if sum(counts) != total:
                raise ContourError("sub-box counts do not add up")
            break
        except ContourError:
            continue
    else:
        raise ConvergenceError(f"no clean initial box for R={R}")

    clusters = []
    cluster_size = 1e-4 * max(1.0, R)
    for bx, c in zip(boxes, counts):
        _locate(cf, bx, c, clusters, cluster_size)

    zeros = []
    for bx, n in clusters:
        c = contour_moments(cf, bx, (1,))[0] / n + bx.center
        zeros.append((_newton(cf, c, n - 1, bx, tol_zero, max_iter), n))

    lams = np.array([z for z, _ in zeros])
    result = []
    for i, (z, n) in enumerate(zeros):
        others = np.delete(lams, i)
        sep = float(np.min(np.abs(others - z))) if others.size else np.inf
        rad = min(0.1, sep / 4)
        m = count_zeros(cf, Circle(z, rad, contour_points))
        if m != n:
            log.warning("tight-circle multiplicity %d differs from cluster count %d at %s", m, n, z)
        result.append(Eigenvalue(z, m, _taylor_data(cf, z, m, rad, contour_points)))
    if sum(ev.multiplicity for ev in result) != total:
        raise ConvergenceError(f"multiplicities sum to {sum(e.multiplicity for e in result)}, box holds {total}",
                               box=box.as_list())

    keep = [ev for ev in result if abs(ev.lam) <= R * (1 + 1e-12) + 1e-9]
    _check_disk_total(cf, R, result, keep)
    keep.sort(key=lambda ev: (round(ev.lam.real, 9), round(ev.lam.imag, 9)))
    return keep


def _check_disk_total(cf, R, found, keep):
    """Compare against a circle count placed in the gap just outside R."""
    H = R + max(0.5, 0.05 * R)
    mods = sorted(abs(ev.lam) for ev in found if abs(ev.lam) <= H) + [H]
    lo = R
    best, r_star = -1.0, None
    for m in mods:
        if m <= R * (1 + 1e-12) + 1e-9:
            lo = max(lo, m)
            continue
        gap = m - lo
        if gap > best:
            best, r_star = gap, lo + 0.5 * gap
        break
    if r_star is None or best < 1e-6:
        return
    inside = sum(ev.multiplicity for ev in found if abs(ev.lam) < r_star)
    n = count_zeros(cf, Circle(0j, r_star))
    if n != inside:
        raise ConvergenceError(f"circle count {n} at r={r_star:.6g} disagrees with {inside} located zeros")


def counting_function(cf: CharacteristicFn, radii: Sequence[float]):
    """[(r, N(r))]: zeros with multiplicity in |lambda| <= r."""
    lo, hi = cf.sigma.support_extrema()
    if not (lo == 0.0 and hi is not None and abs(hi - cf.b) <= 1e-12 * cf.b):
        log.warning("support condition on sigma fails; N(r)/r need not approach b/pi")
    return [(float(r), count_zeros(cf, Circle(0j, float(r)))) for r in radii]


def counting_deviation(cf: CharacteristicFn, radii):
    """N(r) - (b/pi) r, reported without any boundedness claim."""
    return [(r, n - cf.b * r / np.pi) for r, n in counting_function(cf, radii)]


def strip_diagnostic(spectrum: Sequence[Eigenvalue]) -> float:
    """max |Im lambda_n| (0 for an empty spectrum)."""
    if not spectrum:
        return 0.0
    return float(max(abs(ev.lam.imag) for ev in spectrum))


def nearest_eigenvalue(cf: CharacteristicFn, lam: complex, max_iter: int = 40):
    """Newton from ``lam``; used to annotate singular-resolvent errors."""
    z = complex(lam)
    for _ in range(max_iter):
        d1 = delta_derivative(cf, z, 1)
        if d1 == 0:
            break
        dz = delta(cf, z) / d1
        z -= dz
        if abs(dz) < 1e-15 * max(1, abs(z)):
            break
    return z
