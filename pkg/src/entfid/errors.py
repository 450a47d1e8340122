"""Exception types shared across the package."""


class EntfidError(Exception):
    pass


class NotHermitian(EntfidError, ValueError):
    pass


class ConvergenceFailure(EntfidError, RuntimeError):
    pass


class NotDensityMatrix(EntfidError, ValueError):
    pass


class NotNormalized(EntfidError, ValueError):
    pass


class DimensionMismatch(EntfidError, ValueError):
    pass


class InvalidChannel(EntfidError, ValueError):
    pass


class OutOfRange(EntfidError, ValueError):
    pass


class ParseError(EntfidError, ValueError):
    pass
