"""Run configuration, built-in presets and the shipped double-zero fixture."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .boundary import SigmaSpec
from .errors import ConfigurationError
from .function_space import make_grid
from .spectrum import CONTOUR_POINTS, TOL_ZERO, Eigenvalue

PRESETS = ("zero", "antiperiodic", "empty", "double")


@lru_cache(maxsize=1)
def double_fixture() -> dict:
    """Parsed double-zero fixture (sigma = i(alpha + gamma x/b), b = pi)."""
    raw = json.loads(resources.files("nonlocal_fourier").joinpath("data/double_fixture.json").read_text())
    c = lambda p: complex(float(p[0]), float(p[1]))  # noqa: E731
    return {
        "b": np.pi,
        "alpha": float(raw["alpha"]),
        "gamma": float(raw["gamma"]),
        "lambda_star": c(raw["lambda_star"]),
        "multiplicity": int(raw["multiplicity"]),
        "taylor": np.array([c(p) for p in raw["taylor"]]),
        "delta_second": c(raw["delta_second"]),
        "delta_third": c(raw["delta_third"]),
        "radius": float(raw["radius"]),
        "other_zeros": [c(p) for p in raw["other_zeros"]],
        "count_in_radius": int(raw["count_in_radius"]),
    }


def double_eigenvalue() -> Eigenvalue:
    fx = double_fixture()
    return Eigenvalue(fx["lambda_star"], fx["multiplicity"], fx["taylor"])


def preset_sigma(name: str, b: float | None = None) -> SigmaSpec:
    if name == "zero":
        return SigmaSpec.zero(b or np.pi)
    if name == "antiperiodic":
        return SigmaSpec.constant_imag(b or np.pi, 0.5)
    if name == "empty":
        b = b or np.pi
        return SigmaSpec.indicator_i(b, b)
    if name == "double":
        fx = double_fixture()
        return SigmaSpec.linear_imag(fx["b"], fx["alpha"], fx["gamma"])
    raise ConfigurationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


@dataclass
class RunConfig:
    """Everything a CLI run depends on. ``sigma`` is a preset name or a
    sigma JSON object (see :meth:`SigmaSpec.to_json`)."""

    b: float = float(np.pi)
    sigma: object = "antiperiodic"
    n: int = 128
    radius: float = 10.0
    tol_zero: float = TOL_ZERO
    tol_boundary: float = 1e-8
    contour_points: int = CONTOUR_POINTS
    seed: int = 0

    def __post_init__(self):
        self.b = float(self.b)
        self.n = int(self.n)
        self.radius = float(self.radius)
        self.seed = int(self.seed)
        if self.n < 8:
            raise ConfigurationError("n must be at least 8")
        if self.radius <= 0 or self.b <= 0:
            raise ConfigurationError("radius and b must be positive")
        if min(self.tol_zero, self.tol_boundary) <= 0 or self.contour_points < 8:
            raise ConfigurationError("tolerances must be positive and contour_points >= 8")
        if isinstance(self.sigma, str) and self.sigma == "double":
            self.b = double_fixture()["b"]

    @property
    def grid(self):
        return make_grid(self.b, self.n)

    def build_sigma(self) -> SigmaSpec:
        if isinstance(self.sigma, str):
            return preset_sigma(self.sigma, self.b)
        if isinstance(self.sigma, dict):
            return SigmaSpec.from_json(self.sigma, self.b, self.grid)
        raise ConfigurationError(f"cannot build sigma from {self.sigma!r}")

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides) -> "RunConfig":
        data = {}
        if path is not None:
            try:
                data = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known
            if unknown:
                raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(str(exc)) from exc

    def to_json(self) -> dict:
        return asdict(self)
