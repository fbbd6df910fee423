"""Exception types shared across the package."""


class SobspecError(Exception):
    """Base class for all library errors."""


class ParseError(SobspecError, ValueError):
    """A spec string (measure, component, range, scalar) failed to parse."""


class SizeMismatch(SobspecError, ValueError):
    """Operands have incompatible sizes (matrix vs polynomial degree etc.)."""


class InvalidInput(SobspecError, ValueError):
    """Arguments violate a documented precondition."""


class NumericError(SobspecError):
    """Base class for failures of the numeric pipeline (CLI exit code 3)."""


class NotPositiveDefinite(NumericError):
    """A Hermitian truncation failed positive definiteness.

    ``index`` is the 0-based position of the first non-positive pivot.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"non-positive pivot at index {index}")


class NoConvergence(NumericError):
    """An iterative eigensolver exceeded its iteration cap."""


class InvalidDegree(NumericError):
    """Root finding was asked for a polynomial of degree < 1."""


class UnsupportedMeasure(NumericError):
    """The operation does not apply to this measure variant."""


class DenominatorVanishes(NumericError):
    """A density ratio has a (numerically) vanishing denominator."""


class ForbiddenConversion(SobspecError, TypeError):
    """Attempted float -> exact conversion (lossy provenance)."""
