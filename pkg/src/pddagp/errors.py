"""Exception types raised across the package."""


class PddagpError(Exception):
    """Base class for all package errors."""


class MatrixError(PddagpError, ValueError):
    pass


class NonHermitian(MatrixError):
    pass


class NonFinite(MatrixError):
    pass


class NotSquare(MatrixError):
    pass


class SpectrumBelowOne(MatrixError):
    """An ``I + PSD`` matrix was expected but an eigenvalue fell below one."""


class NotPositiveDefinite(MatrixError):
    pass


class NonPSD(MatrixError):
    pass


class DimensionMismatch(PddagpError, ValueError):
    pass


class DegenerateGeometry(PddagpError, ValueError):
    """Two nodes coincide, so a path loss would be infinite."""


class AlreadyNormalized(PddagpError, ValueError):
    pass


class ConfigInvalid(PddagpError, ValueError):
    pass


class NumericalBreakdown(PddagpError, ArithmeticError):
    pass


class InsufficientPoints(PddagpError, ValueError):
    pass
