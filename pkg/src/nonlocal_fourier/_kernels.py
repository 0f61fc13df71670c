"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``NONLOCAL_FOURIER_PURE_NUMPY=1`` before import to force the numpy path
(the benchmark script flips it per run). Both paths share signatures and are
tested against each other.
"""
from __future__ import annotations

import os

import numpy as np

PURE_NUMPY = os.environ.get("NONLOCAL_FOURIER_PURE_NUMPY", "0") not in ("", "0", "false", "False")

try:  # pragma: no cover - import guard
    if PURE_NUMPY:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


# ---------------------------------------------------------------- numpy path

def bary_eval_numpy(points, nodes, bw, values):
    """Barycentric interpolation of ``values`` (n,) or (n, k) at ``points``."""
    points = np.asarray(points, dtype=np.float64)
    values = np.asarray(values, dtype=np.complex128)
    flat = points.ravel()
    squeeze = values.ndim == 1
    vals2 = values[:, None] if squeeze else values
    out = np.empty((flat.size, vals2.shape[1]), dtype=np.complex128)
    chunk = max(1, 2_000_000 // nodes.size)
    for start in range(0, flat.size, chunk):
        p = flat[start:start + chunk]
        diff = p[:, None] - nodes[None, :]
        hit = diff == 0.0
        rows = hit.any(axis=1)
        diff[hit] = 1.0
        c = bw[None, :] / diff
        blk = (c @ vals2) / c.sum(axis=1)[:, None]
        if rows.any():
            idx = np.argmax(hit[rows], axis=1)
            blk[rows] = vals2[idx]
        out[start:start + chunk] = blk
    if squeeze:
        return out[:, 0].reshape(points.shape)
    return out.reshape(points.shape + (vals2.shape[1],))


def circ_matrix_numpy(xs, ts, nodes, bw, fvals, gvals, tq, wq):
    """M[i, j] = integral_{t_j}^{x_i} f(xi) g(x_i + t_j - xi) dxi.

    ``tq`` must be symmetric Gauss nodes on [-1, 1] so the reflected
    abscissa x + t - xi_k coincides with xi_{q-1-k}.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty((xs.size, ts.size), dtype=np.complex128)
    both = np.stack([fvals, gvals], axis=1)
    for i, x in enumerate(xs):
        half = 0.5 * (x - ts)
        pts = ts[:, None] + half[:, None] * (1.0 + tq[None, :])
        v = bary_eval_numpy(pts, nodes, bw, both)
        fk = v[..., 0]
        gk = v[:, ::-1, 1]
        out[i] = half * ((wq[None, :] * fk * gk).sum(axis=1))
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, nogil=True, fastmath=True)
    def _bary_eval_flat(flat, nodes, bw, vr, vi):
        n = nodes.size
        k = vr.shape[1]
        out = np.empty((flat.size, k), dtype=np.complex128)
        sr = np.empty(k)
        si = np.empty(k)
        for i in range(flat.size):
            p = flat[i]
            hit = -1
            for j in range(n):
                if p == nodes[j]:
                    hit = j
            if hit >= 0:
                for m in range(k):
                    out[i, m] = vr[hit, m] + 1j * vi[hit, m]
                continue
            den = 0.0
            sr[:] = 0.0
            si[:] = 0.0
            for j in range(n):
                c = bw[j] / (p - nodes[j])
                den += c
                for m in range(k):
                    sr[m] += c * vr[j, m]
                    si[m] += c * vi[j, m]
            for m in range(k):
                out[i, m] = (sr[m] + 1j * si[m]) / den
        return out

    @njit(cache=True, nogil=True, fastmath=True)
    def _circ_matrix_nb(xs, ts, nodes, bw, fr, fi, gr, gi, tq, wq):
        q = tq.size
        n = nodes.size
        out = np.zeros((xs.size, ts.size), dtype=np.complex128)
        fk = np.empty(q, dtype=np.complex128)
        gk = np.empty(q, dtype=np.complex128)
        for i in range(xs.size):
            x = xs[i]
            for j in range(ts.size):
                t = ts[j]
                half = 0.5 * (x - t)
                if half == 0.0:
                    continue
                for k in range(q):
                    p = t + half * (1.0 + tq[k])
                    hit = -1
                    for m in range(n):
                        if p == nodes[m]:
                            hit = m
                    if hit >= 0:
                        fk[k] = fr[hit] + 1j * fi[hit]
                        gk[k] = gr[hit] + 1j * gi[hit]
                        continue
                    den = 0.0
                    a = 0.0
                    b = 0.0
                    c = 0.0
                    d = 0.0
                    for m in range(n):
                        w = bw[m] / (p - nodes[m])
                        den += w
                        a += w * fr[m]
                        b += w * fi[m]
                        c += w * gr[m]
                        d += w * gi[m]
                    fk[k] = (a + 1j * b) / den
                    gk[k] = (c + 1j * d) / den
                s = 0.0j
                for k in range(q):
                    s += wq[k] * fk[k] * gk[q - 1 - k]
                out[i, j] = half * s
        return out

    def bary_eval(points, nodes, bw, values):
        points = np.asarray(points, dtype=np.float64)
        values = np.asarray(values, dtype=np.complex128)
        squeeze = values.ndim == 1
        vals2 = values[:, None] if squeeze else values
        out = _bary_eval_flat(np.ascontiguousarray(points.ravel()), nodes, bw,
                              np.ascontiguousarray(vals2.real), np.ascontiguousarray(vals2.imag))
        if squeeze:
            return out[:, 0].reshape(points.shape)
        return out.reshape(points.shape + (vals2.shape[1],))

    def circ_matrix(xs, ts, nodes, bw, fvals, gvals, tq, wq):
        f = np.asarray(fvals, dtype=np.complex128)
        g = np.asarray(gvals, dtype=np.complex128)
        c = np.ascontiguousarray
        return _circ_matrix_nb(c(xs, dtype=np.float64), c(ts, dtype=np.float64), nodes, bw,
                               c(f.real), c(f.imag), c(g.real), c(g.imag), tq, wq)

else:  # pragma: no cover
    bary_eval = bary_eval_numpy
    circ_matrix = circ_matrix_numpy


BACKEND = "numba" if HAVE_NUMBA else "numpy"
