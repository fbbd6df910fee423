"""Scalar arithmetic: exact Gaussian-rational and binary floating complex.

Exact scalars are complex numbers whose real and imaginary parts are
arbitrary-precision rationals.  gmpy2 is used for the rational type when
importable (it is considerably faster on large numerators); the stdlib
``fractions.Fraction`` is the fallback.  Set ``SOBSPEC_NO_GMPY=1`` to force
the stdlib backend.

Conversion exact -> float rounds to nearest.  The reverse direction is
deliberately unsupported: a float carries no provenance and must never be
promoted to an exact value.
"""

import os
from fractions import Fraction

from sobspec.errors import ForbiddenConversion, ParseError

if os.environ.get("SOBSPEC_NO_GMPY"):
    _mpq = None
else:
    try:
        from gmpy2 import mpq as _mpq
    except ImportError:
        _mpq = None

RATIONAL_BACKEND = "gmpy2" if _mpq is not None else "fractions"

_RAT_TYPES = (int, Fraction) if _mpq is None else (int, Fraction, type(_mpq(0)))


def rational(value=0, den=None):
    """Build an exact rational from an int, a rational, or a 'p/q' string."""
    if den is not None:
        num = rational(value)
        d = rational(den)
        if d == 0:
            raise ZeroDivisionError("rational with zero denominator")
        return num / d
    if isinstance(value, float):
        raise ForbiddenConversion("float -> exact conversion is not allowed")
    if isinstance(value, str):
        text = value.strip()
        if "." in text or not text:
            raise ParseError(f"not an exact rational: {value!r}")
        try:
            return _mpq(text) if _mpq is not None else Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not an exact rational: {value!r}") from exc
    if isinstance(value, _RAT_TYPES):
        return _mpq(value) if _mpq is not None else Fraction(value)
    raise ParseError(f"cannot build a rational from {type(value).__name__}")


def is_rational(value):
    return isinstance(value, _RAT_TYPES)


def rational_str(value):
    """Canonical lowest-terms text: 'p' or 'p/q'."""
    return str(value)


_R0 = rational(0)
_R1 = rational(1)


class RationalComplex:
    """A complex number with exact rational real and imaginary parts.

    Closed under +, -, *, and / (nonzero divisor) with no rounding.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", rational(re))
        object.__setattr__(self, "im", rational(im))

    @classmethod
    def _make(cls, re, im):
        # Internal fast path: re/im are already rationals.
        self = object.__new__(cls)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("RationalComplex is immutable")

    def __add__(self, other):
        other = as_exact(other)
        return RationalComplex._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_exact(other)
        return RationalComplex._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_exact(other).__sub__(self)

    def __mul__(self, other):
        other = as_exact(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return RationalComplex._make(a * c, _R0)
        return RationalComplex._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_exact(other)
        c, d = other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by exact zero")
            return RationalComplex._make(self.re / c, self.im / c)
        denom = c * c + d * d
        a, b = self.re, self.im
        return RationalComplex._make((a * c + b * d) / denom, (b * c - a * d) / denom)

    def __rtruediv__(self, other):
        return as_exact(other).__truediv__(self)

    def __neg__(self):
        return RationalComplex._make(-self.re, -self.im)

    def conjugate(self):
        return RationalComplex._make(self.re, -self.im)

    def abs2(self):
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def is_real(self):
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (RationalComplex, *_RAT_TYPES)):
            other = as_exact(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"RationalComplex({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return rational_str(self.re)
        return f"({rational_str(self.re)}, {rational_str(self.im)})"


EXACT_ZERO = RationalComplex._make(_R0, _R0)
EXACT_ONE = RationalComplex._make(_R1, _R0)


def as_exact(value):
    """Coerce an int/rational/RationalComplex to RationalComplex."""
    if isinstance(value, RationalComplex):
        return value
    if isinstance(value, _RAT_TYPES):
        return RationalComplex._make(rational(value), _R0)
    if isinstance(value, (float, complex)):
        raise ForbiddenConversion("float -> exact conversion is not allowed")
    raise ParseError(f"cannot build an exact scalar from {type(value).__name__}")


def to_complex(value):
    """Round any scalar (exact or float) to a binary complex."""
    if isinstance(value, RationalComplex):
        return complex(value)
    if isinstance(value, _RAT_TYPES):
        return complex(float(value), 0.0)
    return complex(value)


def parse_exact(re_text, im_text="0"):
    return RationalComplex._make(rational(re_text), rational(im_text))


def format_float(x):
    """Fixed 17-significant-digit decimal used by all CSV output."""
    return "%.17g" % x
