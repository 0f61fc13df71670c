import numpy as np
import pytest

from nonlocal_fourier.characteristic import CharacteristicFn
from nonlocal_fourier.config import preset_sigma
from nonlocal_fourier.convolution import ConvolutionEngine
from nonlocal_fourier.expansion import random_smooth
from nonlocal_fourier.function_space import make_grid
from nonlocal_fourier.spectrum import find_spectrum


class Setup:
    def __init__(self, name, n=128, radius=10.0):
        self.sigma = preset_sigma(name)
        self.b = self.sigma.b
        self.grid = make_grid(self.b, n)
        self.cf = CharacteristicFn(self.sigma)
        self.engine = ConvolutionEngine(self.sigma, self.grid)
        self.radius = radius
        self._spectrum = None

    @property
    def spectrum(self):
        if self._spectrum is None:
            self._spectrum = find_spectrum(self.cf, self.radius)
        return self._spectrum

    def eig(self, lam):
        return min(self.spectrum, key=lambda ev: abs(ev.lam - lam))


@pytest.fixture(scope="session")
def anti():
    return Setup("antiperiodic")


@pytest.fixture(scope="session")
def double():
    return Setup("double", radius=6.0)


@pytest.fixture(scope="session")
def zero_setup():
    return Setup("zero")


@pytest.fixture(scope="session")
def empty_setup():
    return Setup("empty")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def smooth(rng):
    return lambda grid: random_smooth(grid, rng)


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Append a criterion verdict line; printed in the terminal summary."""
    def _rec(number, ok, text):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}")
        print(ACCEPTANCE_LINES[-1])
        return ok
    return _rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
