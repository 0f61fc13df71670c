import numpy as np
import pytest

from nonlocal_fourier.boundary import SigmaSpec, apply_U
from nonlocal_fourier.characteristic import CharacteristicFn
from nonlocal_fourier.convolution import ConvolutionEngine, convolve_resolvent_form, exponential_identity
from nonlocal_fourier.errors import ConfigurationError, SingularResolventError
from nonlocal_fourier.function_space import GridFunction, differentiate, make_grid
from nonlocal_fourier.resolvent import apply_resolvent


def rel(a, b):
    return (a - b).sup_norm() / max(1.0, b.sup_norm())


def test_circ_examples(anti, smooth):
    g = anti.grid
    one = g.constant(1.0)
    E = anti.engine
    assert E.circ(one, one, 1.2, 1.2) == 0
    assert abs(E.circ(one, one, 2.0, 0.0) - 2.0) < 1e-14
    f, h = smooth(g), smooth(g)
    rng = np.random.default_rng(3)
    x, t = rng.uniform(0, np.pi, 20), rng.uniform(0, np.pi, 20)
    assert np.abs(E.circ(f, h, x, t) - E.circ(h, f, x, t)).max() < 1e-10
    assert abs(E.circ(one, one, 0.5, 2.0) + 1.5) < 1e-14  # signed for t > x
    with pytest.raises(ConfigurationError):
        E.circ(one, one, 4.0, 0.0)


def test_zero_sigma_examples():
    g = make_grid(1.0, 64)
    E = ConvolutionEngine(SigmaSpec.zero(1.0), g)
    one = g.constant(1.0)
    assert (E.convolve(one, one) - 1j * g.sample(lambda x: x)).sup_norm() < 1e-14
    e2 = g.sample(lambda x: np.exp(2j * x))
    assert (E.convolve(one, e2) - (e2 - 1) / 2).sup_norm() < 1e-13
    cf = CharacteristicFn(SigmaSpec.zero(1.0))
    assert (convolve_resolvent_form(E, cf, 0.0, one) - 1j * g.sample(lambda x: x)).sup_norm() < 1e-14


def test_antiperiodic_examples(anti):
    g = anti.grid
    one = g.constant(1.0)
    want = g.sample(lambda x: 1j * x - 1j * np.pi / 2)
    assert (anti.engine.convolve(one, one) - want).sup_norm() < 1e-13
    assert (convolve_resolvent_form(anti.engine, anti.cf, 0.0, one) - want).sup_norm() < 1e-13
    e2 = g.sample(lambda x: np.exp(2j * x))
    got = anti.engine.convolve(one, e2)
    assert (got - (e2 - 1) / 2).sup_norm() < 1e-12


@pytest.mark.parametrize("setup", ["anti", "double", "empty_setup"])
def test_algebra(setup, request, smooth):
    s = request.getfixturevalue(setup)
    E, g = s.engine, s.grid
    for _ in range(3):
        f, h = smooth(g), smooth(g)
        assert rel(E.convolve(f, h), E.convolve(h, f)) < 1e-9
    f, h, k = smooth(g), smooth(g), smooth(g)
    assert rel(E.convolve(E.convolve(f, h), k), E.convolve(f, E.convolve(h, k))) < 1e-7
    a = 0.3 - 1.1j
    assert rel(E.convolve(a * f + h, k), a * E.convolve(f, k) + E.convolve(h, k)) < 1e-10


@pytest.mark.parametrize("setup", ["anti", "double"])
def test_derivative_rule_and_closure(setup, request, smooth):
    s = request.getfixturevalue(setup)
    E, g = s.engine, s.grid
    f = apply_resolvent(s.sigma, s.cf, 0.4 + 0.3j, smooth(g)).y
    h = smooth(g)
    fh = E.convolve(f, h)
    assert rel(differentiate(fh), E.convolve(differentiate(f), h)) < 1e-7
    assert abs(apply_U(s.sigma, fh)) < 1e-7


def test_no_annihilators(double, smooth):
    g = double.grid
    f = smooth(g)
    of = double.engine.convolve(g.constant(1.0), f)
    assert (-1j * differentiate(of) - f).sup_norm() < 1e-8
    assert abs(apply_U(double.sigma, of)) < 1e-8


@pytest.mark.parametrize("setup", ["anti", "double"])
def test_exponential_identity(setup, request):
    s = request.getfixturevalue(setup)
    g, x = s.grid, s.grid.nodes
    rng = np.random.default_rng(7)
    for _ in range(10):
        lam, beta = (complex(rng.uniform(-4, 4), rng.uniform(-0.5, 0.5)) for _ in range(2))
        if abs(lam - beta) <= 0.1:
            continue
        eb = GridFunction(g, np.exp(1j * beta * x))
        got = s.engine.convolve(GridFunction(g, np.exp(1j * lam * x)), eb, dg=1j * beta * eb)
        ref = exponential_identity(s.cf, lam, beta, x)
        assert np.abs(got.values - ref).max() < 1e-8 * max(1, np.abs(ref).max())


def test_exponential_identity_limit(anti):
    x = anti.grid.nodes
    lam = 0.7 + 0.1j
    near = exponential_identity(anti.cf, lam, lam + 1e-4, x)
    far = exponential_identity(anti.cf, lam, lam + 2e-3, x)
    assert np.abs(near - far).max() < 1e-2
    assert np.abs(exponential_identity(anti.cf, lam, lam + 1e-3 * (1 - 1e-12), x)
                  - exponential_identity(anti.cf, lam, lam + 1e-3, x)).max() < 1e-9


def test_resolvent_form_matches(anti, smooth):
    f = smooth(anti.grid)
    lam = 0.3 + 0.1j
    direct = apply_resolvent(anti.sigma, anti.cf, lam, f).y
    assert rel(convolve_resolvent_form(anti.engine, anti.cf, lam, f), direct) < 1e-8
    with pytest.raises(SingularResolventError):
        convolve_resolvent_form(anti.engine, anti.cf, 3.0, f)


def test_engine_checks(anti):
    with pytest.raises(ConfigurationError):
        ConvolutionEngine(SigmaSpec.zero(1.0), anti.grid)
    other = make_grid(np.pi, 64).constant(1.0)
    with pytest.raises(ConfigurationError):
        anti.engine.convolve(other, other)
