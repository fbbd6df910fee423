"""Dense Hermitian truncations of infinite matrices.

A truncation is stored either exactly (nested tuples of RationalComplex)
or as a complex128 numpy array.  The Hermitian invariant is checked at
construction: bit-exact in exact mode, to 1e-14 relative in float mode.
"""

import numpy as np

from sobspec.errors import ForbiddenConversion, InvalidInput, SizeMismatch
from sobspec.scalars import EXACT_ONE, EXACT_ZERO, RationalComplex, as_exact, to_complex

EXACT = "exact"
FLOAT = "float"

HERMITIAN_FLOAT_TOL = 1e-14


class HermitianTruncation:
    """The leading (n+1) x (n+1) section of an infinite Hermitian matrix."""

    __slots__ = ("mode", "_rows", "_array")

    def __init__(self, mode, rows=None, array=None, check=True):
        if mode not in (EXACT, FLOAT):
            raise InvalidInput(f"unknown scalar mode {mode!r}")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_array", array)
        if self.size < 1:
            raise InvalidInput("truncation size must be >= 1")
        if check:
            self._check_hermitian()

    def __setattr__(self, name, value):
        raise AttributeError("HermitianTruncation is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, rows, check=True):
        rows = tuple(tuple(as_exact(x) for x in row) for row in rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise InvalidInput("matrix rows must form a square grid")
        return cls(EXACT, rows=rows, check=check)

    @classmethod
    def floating(cls, array, check=True):
        arr = np.array(array, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInput("matrix must be square")
        arr.setflags(write=False)
        return cls(FLOAT, array=arr, check=check)

    @classmethod
    def identity(cls, size, mode=EXACT):
        if mode == EXACT:
            rows = [
                [EXACT_ONE if i == j else EXACT_ZERO for j in range(size)]
                for i in range(size)
            ]
            return cls.exact(rows, check=False)
        return cls.floating(np.eye(size, dtype=np.complex128), check=False)

    @classmethod
    def from_entry_fn(cls, size, entry_fn, mode=EXACT, check=True):
        """Build from entry_fn(i, j); only i >= j is queried, mirror fills the rest."""
        if mode == EXACT:
            rows = [[EXACT_ZERO] * size for _ in range(size)]
            for i in range(size):
                for j in range(i + 1):
                    v = as_exact(entry_fn(i, j))
                    rows[i][j] = v
                    rows[j][i] = v.conjugate()
            return cls.exact(rows, check=check)
        arr = np.zeros((size, size), dtype=np.complex128)
        for i in range(size):
            for j in range(i + 1):
                v = complex(entry_fn(i, j))
                arr[i, j] = v
                arr[j, i] = v.conjugate()
        return cls.floating(arr, check=check)

    # -- invariants ----------------------------------------------------

    def _check_hermitian(self):
        n = self.size
        if self.mode == EXACT:
            rows = self._rows
            for i in range(n):
                if rows[i][i].im:
                    raise InvalidInput(f"diagonal entry ({i},{i}) is not real")
                for j in range(i):
                    if rows[i][j] != rows[j][i].conjugate():
                        raise InvalidInput(f"entries ({i},{j})/({j},{i}) not conjugate")
        else:
            a = self._array
            scale = float(np.max(np.abs(a))) if n else 0.0
            if scale == 0.0:
                return
            dev = float(np.max(np.abs(a - a.conj().T)))
            if dev > HERMITIAN_FLOAT_TOL * scale:
                raise InvalidInput(
                    f"matrix is not Hermitian to {HERMITIAN_FLOAT_TOL:g} relative "
                    f"(deviation {dev / scale:.3e})"
                )

    # -- accessors -----------------------------------------------------

    @property
    def size(self):
        return len(self._rows) if self.mode == EXACT else self._array.shape[0]

    @property
    def degree_bound(self):
        return self.size - 1

    def entry(self, i, j):
        if self.mode == EXACT:
            return self._rows[i][j]
        return complex(self._array[i, j])

    def rows(self):
        """Exact-mode row grid (tuple of tuples of RationalComplex)."""
        if self.mode != EXACT:
            raise InvalidInput("rows() is only available in exact mode")
        return self._rows

    def as_array(self):
        """complex128 view (converting exact entries if needed)."""
        if self.mode == FLOAT:
            return self._array
        n = self.size
        arr = np.empty((n, n), dtype=np.complex128)
        for i, row in enumerate(self._rows):
            for j, v in enumerate(row):
                arr[i, j] = complex(v)
        return arr

    def diagonal(self):
        if self.mode == EXACT:
            return [self._rows[i][i] for i in range(self.size)]
        return [complex(x) for x in np.diagonal(self._array)]

    # -- derived truncations --------------------------------------------

    def section(self, size):
        """Leading principal section of the given size."""
        if size < 1 or size > self.size:
            raise SizeMismatch(f"section size {size} not in 1..{self.size}")
        if size == self.size:
            return self
        if self.mode == EXACT:
            rows = tuple(row[:size] for row in self._rows[:size])
            return HermitianTruncation(EXACT, rows=rows, check=False)
        return HermitianTruncation(FLOAT, array=self._array[:size, :size], check=False)

    def drop_first(self):
        """Submatrix with row 0 and column 0 removed (entries shifted by one)."""
        if self.size < 2:
            raise SizeMismatch("cannot drop first row/column of a 1x1 matrix")
        if self.mode == EXACT:
            rows = tuple(row[1:] for row in self._rows[1:])
            return HermitianTruncation(EXACT, rows=rows, check=False)
        return HermitianTruncation(FLOAT, array=self._array[1:, 1:], check=False)

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return HermitianTruncation.floating(self.as_array(), check=False)

    def to_exact(self):
        if self.mode == EXACT:
            return self
        raise ForbiddenConversion("float -> exact conversion is not allowed")

    # -- algebra ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, HermitianTruncation):
            return NotImplemented
        if other.size != self.size:
            raise SizeMismatch("cannot add truncations of different sizes")
        if self.mode == EXACT and other.mode == EXACT:
            rows = tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self._rows, other._rows)
            )
            return HermitianTruncation(EXACT, rows=rows, check=False)
        arr = self.as_array() + other.as_array()
        return HermitianTruncation(FLOAT, array=arr, check=False)

    def scale(self, factor):
        """Multiply by a positive real scalar (rational in exact mode)."""
        if self.mode == EXACT:
            f = as_exact(factor)
            rows = tuple(tuple(f * x for x in row) for row in self._rows)
            return HermitianTruncation(EXACT, rows=rows, check=False)
        arr = float(factor) * self._array
        return HermitianTruncation(FLOAT, array=arr, check=False)

    def same_entries(self, other):
        """Entry-wise equality (exact compare; float compares bit patterns)."""
        if self.mode != other.mode or self.size != other.size:
            return False
        if self.mode == EXACT:
            return self._rows == other._rows
        return bool(np.array_equal(self._array, other._array))

    def __repr__(self):
        return f"<HermitianTruncation {self.size}x{self.size} {self.mode}>"


def exact_entry_grid(matrix):
    """Mutable list-of-lists copy of an exact truncation's entries."""
    return [list(row) for row in matrix.rows()]
