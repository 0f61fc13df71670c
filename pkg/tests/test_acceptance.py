"""The eight acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line (shown in the pytest terminal summary)
before asserting.
"""
import subprocess
import sys
import time

import numpy as np

from nonlocal_fourier import expansion as X
from nonlocal_fourier.boundary import apply_U
from nonlocal_fourier.characteristic import delta
from nonlocal_fourier.config import double_fixture
from nonlocal_fourier.convolution import convolve_resolvent_form, exponential_identity
from nonlocal_fourier.function_space import GridFunction, differentiate
from nonlocal_fourier.resolvent import apply_resolvent
from nonlocal_fourier.spectrum import Circle, Rectangle, count_zeros, find_spectrum

B = np.pi


def _rel(a, b):
    return (a - b).sup_norm() / max(1.0, b.sup_norm())


def _nonspectral(cf, rng, k):
    out = []
    while len(out) < k:
        lam = complex(rng.uniform(-6, 6), rng.uniform(-1, 1))
        if abs(delta(cf, lam)) > 0.05:
            out.append(lam)
    return out


def test_criterion_1_antiperiodic_spectrum(anti, record):
    t0 = time.perf_counter()
    sp = find_spectrum(anti.cf, 21.0)
    dt = time.perf_counter() - t0
    exact = np.arange(-21, 22, 2, dtype=float)
    got = np.array([ev.lam for ev in sp])
    simple = all(ev.multiplicity == 1 for ev in sp)
    err = np.abs(got - exact).max() if got.size == exact.size else np.inf
    d0 = np.abs(np.array([ev.taylor[0] for ev in sp]) - 2j / np.pi).max() if sp else np.inf
    ok = got.size == exact.size and simple and err < 1e-8 and d0 < 1e-8 and dt < 30
    record(1, ok, f"{got.size} zeros (want 22), simple={simple}, max|err|={err:.1e}, "
                  f"max|d0-2i/pi|={d0:.1e}, {dt:.2f} s")
    assert ok


def test_criterion_2_counting(double, anti, record):
    n50 = count_zeros(anti.cf, Circle(0j, 50.0))
    dev = abs(n50 / 50 - 1)
    box = Rectangle(-6.5 + 0.0071, 6.5 + 0.0071, -6.5 + 0.0043, 6.5 + 0.0043)
    total = count_zeros(double.cf, box)
    xm, ym = box.x0 + 0.4871 * (box.x1 - box.x0), box.y0 + 0.5213 * (box.y1 - box.y0)
    quads = [Rectangle(a, b, c, d) for a, b in ((box.x0, xm), (xm, box.x1)) for c, d in ((box.y0, ym), (ym, box.y1))]
    parts = [count_zeros(double.cf, q) for q in quads]
    ok = dev < 0.1 and sum(parts) == total
    record(2, ok, f"N(50)={n50}, |N/r-1|={dev:.3f}; fixture box count {total} = {'+'.join(map(str, parts))}")
    assert ok


def test_criterion_3_empty_spectrum(empty_setup, zero_setup, record):
    n = count_zeros(empty_setup.cf, Circle(0j, 100.0))
    sp = find_spectrum(empty_setup.cf, 100.0)
    rng = np.random.default_rng(0)
    lam = rng.uniform(-100, 100, 500) + 1j * rng.uniform(-50, 50, 500)
    one = np.abs(delta(zero_setup.cf, lam) - 1).max()
    oneq = np.abs(delta(zero_setup.cf, lam, "quadrature") - 1).max()
    ok = n == 0 and not sp and one < 1e-14 and oneq < 1e-14
    record(3, ok, f"indicator: {n} zeros in |lambda|<=100; zero sigma: max|Delta-1|={max(one, oneq):.1e}")
    assert ok


def test_criterion_4_resolvent(anti, double, record):
    rng = np.random.default_rng(4)
    worst = [0.0, 0.0, 0.0]
    for s in (anti, double):
        for lam in _nonspectral(s.cf, rng, 5):
            for _ in range(10):
                f = X.random_smooth(s.grid, rng)
                r = apply_resolvent(s.sigma, s.cf, lam, f)
                fn = f.sup_norm()
                worst[0] = max(worst[0], r.residual_ode / ((1 + abs(lam)) * fn))
                worst[1] = max(worst[1], r.residual_boundary / fn)
                worst[2] = max(worst[2], _rel(convolve_resolvent_form(s.engine, s.cf, lam, f), r.y))
    ok = all(w < 1e-8 for w in worst)
    record(4, ok, "ODE residual/((1+|l|)|f|)={:.1e}, |U(y)|/|f|={:.1e}, Res vs Res3={:.1e}".format(*worst))
    assert ok


def test_criterion_5_convolution_algebra(anti, record):
    E, g, rng = anti.engine, anti.grid, np.random.default_rng(5)
    rs = lambda: X.random_smooth(g, rng)  # noqa: E731
    comm = max(_rel(E.convolve(f, h), E.convolve(h, f)) for f, h in ((rs(), rs()) for _ in range(20)))
    assoc = 0.0
    for _ in range(10):
        f, h, k = rs(), rs(), rs()
        assoc = max(assoc, _rel(E.convolve(E.convolve(f, h), k), E.convolve(f, E.convolve(h, k))))
    f, h, k = rs(), rs(), rs()
    a = complex(rng.normal(), rng.normal())
    bil = _rel(E.convolve(a * f + h, k), a * E.convolve(f, k) + E.convolve(h, k))
    fd = apply_resolvent(anti.sigma, anti.cf, 0.5 + 0.25j, rs()).y
    fk = E.convolve(fd, k)
    deriv = _rel(E.convolve(differentiate(fd), k), differentiate(fk))
    closure = abs(apply_U(anti.sigma, fk))
    x, ident = g.nodes, 0.0
    count = 0
    while count < 10:
        lam, beta = (complex(rng.uniform(-4, 4), rng.uniform(-0.5, 0.5)) for _ in range(2))
        if abs(lam - beta) <= 0.1:
            continue
        count += 1
        eb = GridFunction(g, np.exp(1j * beta * x))
        got = E.convolve(GridFunction(g, np.exp(1j * lam * x)), eb, dg=1j * beta * eb)
        ref = exponential_identity(anti.cf, lam, beta, x)
        ident = max(ident, np.abs(got.values - ref).max() / max(1.0, np.abs(ref).max()))
    ok = comm < 1e-9 and assoc < 1e-7 and bil < 1e-10 and deriv < 1e-7 and closure < 1e-7 and ident < 1e-8
    record(5, ok, f"comm={comm:.1e} assoc={assoc:.1e} bilin={bil:.1e} deriv={deriv:.1e} "
                  f"|U(f*g)|={closure:.1e} exp-identity={ident:.1e}")
    assert ok


def test_criterion_6_expansion(anti, double, record):
    rng = np.random.default_rng(6)
    idem = orth = bio = conv = 0.0
    for s, R in ((anti, 10.0), (double, 6.0)):
        f = X.random_smooth(s.grid, rng)
        evs = sorted(s.spectrum, key=lambda ev: abs(ev.lam))[:3]
        P = [X.project(s.engine, ev, f) for ev in evs]
        for i, ev in enumerate(evs):
            idem = max(idem, _rel(X.project(s.engine, ev, P[i]), P[i]))
            for j in range(len(evs)):
                if j != i:
                    orth = max(orth, X.project(s.engine, ev, P[j]).sup_norm() / max(1.0, P[j].sup_norm()))
        bases = [X.build_root_basis(ev, s.grid, s.sigma) for ev in s.spectrum[:5]]
        M = X.biorthogonality_matrix(bases)
        bio = max(bio, np.abs(M - np.eye(len(M))).max())
        h = X.random_smooth(s.grid, rng)
        lhs = X.fourier_transform(s.engine, s.spectrum, s.engine.convolve(f, h), R)
        rhs = X.cauchy_convolve(X.fourier_transform(s.engine, s.spectrum, f, R),
                                X.fourier_transform(s.engine, s.spectrum, h, R))
        conv = max(conv, lhs.max_abs_diff(rhs))
    ev = double.eig(double_fixture()["lambda_star"])
    Bs = X.build_root_basis(ev, double.grid)
    table = 0.0
    m = ev.multiplicity
    for p in range(m):
        for q in range(m):
            got = double.engine.convolve(Bs.functions[p], Bs.functions[q], dg=Bs.derivative(q))
            want = Bs.functions[p + q - m + 1].values if p + q >= m - 1 else 0.0
            table = max(table, np.abs(got.values - want).max())
    ok = idem < 1e-7 and orth < 1e-7 and table < 1e-6 and bio < 1e-6 and conv < 1e-6
    record(6, ok, f"idempotence={idem:.1e} orthogonality={orth:.1e} product table (m=2)={table:.1e} "
                  f"biorthogonality={bio:.1e} convolution theorem={conv:.1e}")
    assert ok


def test_criterion_7_remainder(anti, record):
    g = anti.grid
    qerr = 0.0
    for mu in (0.5, 1.7, 2.3):
        f = g.sample(lambda x: np.exp(1j * mu * x))
        Q = X.remainder(anti.engine, anti.spectrum, f, 10.0)
        qerr = max(qerr, (Q - X.remainder_exp_contour(anti.cf, mu, 10.0, g)).sup_norm())
    sp = find_spectrum(anti.cf, 41.0)
    f = X.bump_function(g)
    radii = [10.0, 20.0, 40.0]
    S = X.partial_sums(anti.engine, sp, f, radii)
    w = [X.weighted_remainder_norm(S[r] - f) for r in radii]
    ok = qerr < 1e-6 and w[0] > w[1] > w[2]
    record(7, ok, f"sum vs contour Q_R={qerr:.1e}; weighted norms sin^2 bump R=10,20,40: "
                  + ", ".join(f"{v:.2e}" for v in w))
    assert ok


def test_criterion_8_cli_verify(record):
    t0 = time.perf_counter()
    codes = {}
    for preset in ("antiperiodic", "double"):
        r = subprocess.run([sys.executable, "-m", "nonlocal_fourier.cli", "verify", "--preset", preset, "--n", "128"],
                           capture_output=True, text=True)
        codes[preset] = r.returncode
        if r.returncode:
            print(r.stdout, r.stderr)
    dt = time.perf_counter() - t0
    ok = all(c == 0 for c in codes.values()) and dt < 300
    record(8, ok, f"exit codes {codes}, {dt:.1f} s total")
    assert ok
