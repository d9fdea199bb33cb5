"""Exception hierarchy shared by every module of the package."""


class SLTransError(Exception):
    """Base class for all package errors."""


class ParseError(SLTransError):
    """A problem file or command-line option could not be understood."""


class ValidationError(SLTransError):
    """The problem data violates an invariant.

    ``issues`` holds every problem found, not just the first one.
    """

    def __init__(self, message, issues=()):
        super().__init__(message)
        self.issues = list(issues) or [message]


class ProblemShapeError(ValidationError):
    pass


class NonMonotonePoints(ValidationError):
    pass


class NonPositiveRho(ValidationError):
    pass


class DegenerateTransmission(ValidationError):
    pass


class NonPositiveDelta(ValidationError):
    pass


class VacuousBoundaryCondition(ValidationError):
    pass


class IndexOutOfRange(SLTransError, IndexError):
    pass


class NumericError(SLTransError):
    """A numerical procedure failed to deliver a result."""


class StepLimitExceeded(NumericError):
    pass


class StepUnderflow(NumericError):
    pass


class OutOfDomain(NumericError, ValueError):
    pass


class GridTooCoarse(NumericError):
    pass


class NoSignChange(NumericError):
    pass


class MaxIterations(NumericError):
    pass


class BranchOutOfRange(SLTransError, IndexError):
    pass


class CaseUnsupported(SLTransError):
    pass


class ValidationWarning(UserWarning):
    """Lenient validation found a Δ minor that is not strictly positive."""


class PhaseAccuracyWarning(UserWarning):
    """The integration range spans so many oscillations that phase error grows."""
