import numpy as np
import pytest

from nonlocal_fourier.boundary import SigmaSpec
from nonlocal_fourier.characteristic import CharacteristicFn, delta, delta_derivative, g_function
from nonlocal_fourier.errors import ConfigurationError, RangeError
from nonlocal_fourier.function_space import make_grid

B = np.pi
PRESETS = [SigmaSpec.zero(B), SigmaSpec.indicator_i(B, 1.3), SigmaSpec.indicator_i(B, B),
           SigmaSpec.constant_imag(B, 0.5), SigmaSpec.constant_imag(B, 2.0)]


def test_examples():
    lam = np.array([0.3 + 0.1j, -4.0, 7 - 2j])
    assert np.all(delta(CharacteristicFn(SigmaSpec.zero(B)), lam) == 1)
    cf = CharacteristicFn(SigmaSpec.indicator_i(B, 1.3))
    assert np.abs(delta(cf, lam) - np.exp(1.3j * lam)).max() < 1e-14
    cf = CharacteristicFn(SigmaSpec.constant_imag(B, 0.5))
    assert abs(delta(cf, 1.0)) < 1e-15 and abs(delta(cf, 2.0) - 1) < 1e-15
    assert abs(delta_derivative(cf, 1.0, 1) + 1j * np.pi / 2) < 1e-14
    assert delta_derivative(CharacteristicFn(SigmaSpec.zero(B)), 0.7, 3) == 0


@pytest.mark.parametrize("sigma", PRESETS, ids=lambda s: repr(s))
def test_quadrature_matches_closed_form(sigma):
    cf = CharacteristicFn(sigma)
    rng = np.random.default_rng(1)
    lam = rng.uniform(-35, 35, 200) + 1j * rng.uniform(-5, 5, 200)
    lam = lam[np.abs(lam) <= 50]
    for j in range(0, 4):
        c = cf.derivatives(lam, j, "closed")
        q = cf.derivatives(lam, j, "quadrature")
        assert np.max(np.abs(c - q) / np.maximum(1, np.abs(c))) < 1e-11


@pytest.mark.parametrize("sigma", PRESETS + [SigmaSpec.linear_imag(B, 0.5, 1.9)], ids=lambda s: repr(s))
def test_finite_difference(sigma):
    cf = CharacteristicFn(sigma)
    h = 1e-5
    for lam in (0.4 + 0.2j, -2.1, 3.3 - 0.5j):
        fd = (delta(cf, lam + h) - delta(cf, lam - h)) / (2 * h)
        assert abs(fd - delta_derivative(cf, lam, 1)) < 1e-7 * max(1, abs(fd))


def test_linear_imag_closed_form():
    a, gm = 0.5, 1.9
    cf = CharacteristicFn(SigmaSpec.linear_imag(B, a, gm))
    for lam in (0.7 + 0.1j, -3.2 + 0.4j, 5.0):
        E = np.exp(1j * lam * B)
        want = 1 + a * (E - 1) + gm * E + 1j * gm * (E - 1) / (B * lam)
        assert abs(delta(cf, lam) - want) < 1e-12


def test_conjugate_symmetry():
    cf = CharacteristicFn(SigmaSpec.constant_imag(B, 0.5))
    lam = np.array([0.3 + 0.4j, 5 - 1j, -2.2 + 0.01j])
    assert np.abs(delta(cf, -np.conj(lam), "quadrature") - np.conj(delta(cf, lam, "quadrature"))).max() < 1e-11


def test_errors():
    cf = CharacteristicFn(SigmaSpec.constant_imag(B, 0.5))
    with pytest.raises(RangeError):
        delta(cf, 300j)
    with pytest.raises(ConfigurationError):
        delta_derivative(cf, 1.0, 13)
    with pytest.raises(ConfigurationError):
        delta_derivative(cf, 1.0, 0)
    with pytest.raises(ConfigurationError):
        CharacteristicFn(SigmaSpec.linear_imag(B, 0.5, 1.0)).derivatives(1.0, 0, "closed")


def test_g_function():
    g1 = make_grid(1.0, 32)
    cf0 = CharacteristicFn(SigmaSpec.zero(1.0))
    assert abs(g_function(cf0, g1.constant(1.0), 1.0, 0.0) - 1j) < 1e-14
    assert g_function(cf0, g1.constant(0.0), 0.5, 2.0) == 0
    cf = CharacteristicFn(SigmaSpec.constant_imag(B, 0.5))
    g = make_grid(B, 64)
    f = g.sample(lambda x: np.cos(x) + 1j)
    assert np.abs(g_function(cf, f, g.nodes[::7], 3.0)).max() < 1e-13
