"""Exception hierarchy shared by every module."""


class DiscofieldError(Exception):
    """Base class for all errors raised by the package."""


class QuadratureUnderResolved(DiscofieldError, ValueError):
    pass


class FamilyMismatch(DiscofieldError, ValueError):
    pass


class GridTooCoarse(DiscofieldError, ValueError):
    pass


class NotHermitian(DiscofieldError, ValueError):
    pass


class ConvergenceFailure(DiscofieldError, RuntimeError):
    pass


class SpacelikeMomentum(DiscofieldError, ValueError):
    pass


class DimensionCapExceeded(DiscofieldError, ValueError):
    pass


class NonDiagonalUnsupported(DiscofieldError, ValueError):
    pass


class NotEvaluable(DiscofieldError, ValueError):
    pass


class ParseError(DiscofieldError, ValueError):
    """Malformed configuration file; message carries line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(DiscofieldError, ValueError):
    """Configuration or domain-type invariant violated."""
