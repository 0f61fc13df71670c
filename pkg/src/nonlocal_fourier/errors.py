"""Exception hierarchy. CLI exit codes are keyed off these classes."""


class NonlocalFourierError(Exception):
    pass


class ConfigurationError(NonlocalFourierError, ValueError):
    """Invalid sizes, mismatched grids, bad config fields (exit code 1)."""


class DomainError(NonlocalFourierError, ValueError):
    """Evaluation point outside [0, b]."""


class NumericalError(NonlocalFourierError, ArithmeticError):
    """Base for failures of a numerical procedure (exit code 2)."""


class RangeError(NumericalError):
    """|Im lambda| * b beyond the overflow guard."""


class ContourError(NumericalError):
    """Argument-principle count did not round cleanly; contour too close to a zero."""


class ConvergenceError(NumericalError):
    """Zero refinement failed; ``box`` names the offending region."""

    def __init__(self, msg, box=None):
        super().__init__(msg)
        self.box = box


class SingularResolventError(NumericalError):
    """lambda lies at (or numerically on) the spectrum."""

    def __init__(self, msg, lam=None, nearest=None):
        super().__init__(msg)
        self.lam = lam
        self.nearest = nearest


class InvalidEigenvalueError(NonlocalFourierError, ValueError):
    pass


class DomainWarning(UserWarning):
    """Function handed to L does not satisfy U(y) = 0."""
