"""Spectral analysis of L = -i d/dx on L2(0, b) under a nonlocal boundary
condition y(0) = integral_0^b (-i y') conj(sigma) dx.

Modules: function_space, boundary, characteristic, spectrum, convolution,
resolvent, expansion, config, verify, cli.
"""
from ._kernels import BACKEND
from .boundary import ConditionReport, SigmaSpec, apply_U, check_conditions
from .characteristic import CharacteristicFn, delta, delta_derivative
from .config import PRESETS, RunConfig, double_fixture, preset_sigma
from .convolution import ConvolutionEngine, convolve_resolvent_form, exponential_identity
from .errors import (ConfigurationError, ContourError, ConvergenceError, DomainError, DomainWarning,
                     InvalidEigenvalueError, NonlocalFourierError, NumericalError, RangeError,
                     SingularResolventError)
from .expansion import (RootBasis, SequenceElement, biorthogonal, build_root_basis, cauchy_convolve,
                        coefficients, fourier_transform, partial_sum, project, project_contour, remainder,
                        remainder_exp_contour, riesz_diagnostics, weighted_remainder_norm)
from .function_space import ChebGrid, GridFunction, Segment, evaluate, make_grid
from .resolvent import apply_L, apply_resolvent
from .spectrum import Eigenvalue, count_zeros, counting_function, find_spectrum

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConditionReport",
    "SigmaSpec",
    "apply_U",
    "check_conditions",
    "CharacteristicFn",
    "delta",
    "delta_derivative",
    "PRESETS",
    "RunConfig",
    "double_fixture",
    "preset_sigma",
    "ConvolutionEngine",
    "convolve_resolvent_form",
    "exponential_identity",
    "ConfigurationError",
    "ContourError",
    "ConvergenceError",
    "DomainError",
    "DomainWarning",
    "InvalidEigenvalueError",
    "NonlocalFourierError",
    "NumericalError",
    "RangeError",
    "SingularResolventError",
    "RootBasis",
    "SequenceElement",
    "biorthogonal",
    "build_root_basis",
    "cauchy_convolve",
    "coefficients",
    "fourier_transform",
    "partial_sum",
    "project",
    "project_contour",
    "remainder",
    "remainder_exp_contour",
    "riesz_diagnostics",
    "weighted_remainder_norm",
    "ChebGrid",
    "GridFunction",
    "Segment",
    "evaluate",
    "make_grid",
    "apply_L",
    "apply_resolvent",
    "Eigenvalue",
    "count_zeros",
    "counting_function",
    "find_spectrum",
]
