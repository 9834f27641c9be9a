"""Exception types shared across the package."""


class PcurvError(Exception):
    """Base class for all errors raised by pcurv."""


class ParameterError(PcurvError, ValueError):
    """Ring parameters are invalid or do not match between operands."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class InvariantViolation(PcurvError):
    """Input data breaks a structural invariant (e.g. a non-graded matrix)."""


class InternalError(PcurvError):
    """A result that should be impossible; points at a bug, not at bad input."""


class UnsupportedError(PcurvError):
    """The requested computation is outside the supported range of an engine."""


class InconsistencyError(PcurvError):
    """The covariant-constancy system has no solution with the given data."""


class TDegreeOverflow(PcurvError):
    """A t-degree cap was exceeded during equivariant arithmetic."""
