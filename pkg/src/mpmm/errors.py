"""Exception types shared across the library."""


class MpmmError(Exception):
    """Base class for all library errors."""


class RangeError(MpmmError, ArithmeticError):
    """A result left the representable range (overflow, or an error term
    that would fall below the subnormal floor)."""


class PrecisionMismatchError(MpmmError, ValueError):
    """Operands carry different precisions."""


class ShapeError(MpmmError, ValueError):
    """Matrix dimensions are incompatible with the requested operation."""


class TableFormatError(MpmmError, ValueError):
    """A tuning-table or matrix-dump file could not be parsed."""


class MeasurementError(MpmmError, RuntimeError):
    """A timing run produced an unusable measurement (zero/negative elapsed,
    or another timed run holds the benchmark lock)."""
