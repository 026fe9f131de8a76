"""Exception hierarchy shared by every module."""


class GkpiError(Exception):
    """Base class for all errors raised by gkpi."""


class InputError(GkpiError, ValueError):
    """Malformed or inconsistent input (maps to CLI exit code 2)."""


class DimensionMismatch(InputError):
    pass


class NotSquare(InputError):
    pass


class LengthMismatch(InputError):
    pass


class SublengthTooLarge(InputError):
    pass


class NotPeriodic(InputError):
    pass


class FieldMismatch(InputError):
    pass


class GeneratorCountMismatch(InputError):
    pass


class SizeMismatch(InputError):
    pass


class InvalidBound(InputError):
    pass


class WrongLength(InputError):
    pass


class HorizonZero(InputError):
    pass


class InvalidEll(InputError):
    """Requested ell is below the measured Bergman bound."""

    def __init__(self, message, measured):
        super().__init__(message)
        self.measured = measured


class BudgetExceeded(GkpiError):
    """A combinatorial budget cap was hit (maps to CLI exit code 3)."""


class StepBudgetExceeded(BudgetExceeded):
    """Word reduction did not finish within its step budget.

    Carries the partial trace for diagnosis. Seeing this when the growth
    hypothesis holds indicates a bug.
    """

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


class GrowthHypothesisViolated(GkpiError):
    """The difference bound d_i - d_{i-1} <= ell fails at a needed level."""
