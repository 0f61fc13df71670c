import json

import numpy as np
import pytest

from nonlocal_fourier.boundary import SigmaSpec
from nonlocal_fourier.characteristic import CharacteristicFn, delta_derivative
from nonlocal_fourier.errors import ContourError
from nonlocal_fourier.spectrum import (Circle, Eigenvalue, Rectangle, count_zeros, counting_deviation,
                                       counting_function, find_spectrum, strip_diagnostic)

B = np.pi


def test_count_examples(anti, zero_setup, empty_setup):
    assert count_zeros(anti.cf, Circle(0j, 10.0)) == 10
    assert count_zeros(zero_setup.cf, Rectangle(-5, 5, -5, 5)) == 0
    for box in (Circle(0j, 50.0), Rectangle(-20, 7, -3, 11)):
        assert count_zeros(empty_setup.cf, box) == 0


def test_count_rectangle(anti):
    assert count_zeros(anti.cf, Rectangle(0.5, 6.5, -1, 1)) == 3


def test_contour_on_zero_raises(anti):
    with pytest.raises(ContourError):
        count_zeros(anti.cf, Circle(0j, 1.0), max_level=1)


def test_antiperiodic_spectrum(anti):
    sp = anti.spectrum
    assert [round(ev.lam.real) for ev in sp] == [-9, -7, -5, -3, -1, 1, 3, 5, 7, 9]
    for ev in sp:
        assert ev.multiplicity == 1
        assert abs(ev.lam - round(ev.lam.real)) < 1e-10
        assert abs(ev.taylor[0] - 2j / np.pi) < 1e-10
        assert abs(ev.taylor[0] * delta_derivative(anti.cf, ev.lam, 1) - 1) < 1e-8
    assert strip_diagnostic(sp) < 1e-10


def test_zero_and_empty(zero_setup, empty_setup):
    assert find_spectrum(zero_setup.cf, 100.0) == []
    assert find_spectrum(empty_setup.cf, 30.0) == []
    assert strip_diagnostic([]) == 0.0
    assert all(n == 0 for _, n in counting_function(zero_setup.cf, [5, 20]))


def test_double_fixture_spectrum(double):
    from nonlocal_fourier.config import double_fixture

    fx = double_fixture()
    sp = double.spectrum
    assert sum(ev.multiplicity for ev in sp) == fx["count_in_radius"]
    star = double.eig(fx["lambda_star"])
    assert star.multiplicity == 2 and abs(star.taylor[0]) > 0.1
    assert abs(star.lam - fx["lambda_star"]) < 1e-10
    assert np.abs(star.taylor - fx["taylor"]).max() < 1e-8
    others = sorted((ev.lam for ev in sp if ev is not star), key=lambda z: z.real)
    assert np.abs(np.array(others) - np.array(fx["other_zeros"])).max() < 1e-10


def test_granularity_independent(double):
    a = find_spectrum(double.cf, 6.0)
    b = find_spectrum(double.cf, 6.0, granularity=3)
    assert len(a) == len(b)
    assert max(abs(x.lam - y.lam) for x, y in zip(a, b)) < 1e-9


def test_zero_on_radius(anti):
    sp = find_spectrum(anti.cf, 5.0)
    assert [round(ev.lam.real) for ev in sp] == [-5, -3, -1, 1, 3, 5]


def test_counting(anti):
    (r, n), = counting_function(anti.cf, [50.0])
    assert abs(n / r - 1) < 0.1
    dev = counting_deviation(anti.cf, [10.0, 20.0])
    assert all(abs(d) <= 1 for _, d in dev)


def test_counting_warns_without_support(caplog):
    cf = CharacteristicFn(SigmaSpec.indicator_i(B, 1.0))
    counting_function(cf, [5.0])
    assert "support condition" in caplog.text


def test_indicator_partial_spectrum():
    # sigma = i on [0, c], c < b: Delta = exp(i lam c), still no zeros
    cf = CharacteristicFn(SigmaSpec.indicator_i(B, 1.0))
    assert find_spectrum(cf, 20.0) == []


def test_eigenvalue_json():
    ev = Eigenvalue(1 + 2j, 2, [1j, 2.0])
    back = Eigenvalue.from_json(json.loads(json.dumps(ev.to_json())))
    assert back.lam == ev.lam and back.multiplicity == 2 and np.array_equal(back.taylor, ev.taylor)
