"""Matrix sources: things that can produce nested Hermitian truncations.

Diagnostics consume sources rather than fixed matrices so that one object
can be sampled at every truncation size in a range.  All sources generate
sections of a single infinite matrix, so truncations at different sizes
are leading sections of each other.
"""

from sobspec.errors import ForbiddenConversion, SizeMismatch
from sobspec.matrices import EXACT, FLOAT, HermitianTruncation
from sobspec.measures import format_measure, moment, moment_matrix
from sobspec.scalars import EXACT_ONE, EXACT_ZERO, to_complex


class MatrixSource:
    """Interface: mode, description, truncation(size), entry(i, j)."""

    mode = EXACT
    description = "?"
    max_size = None  # None = unbounded

    def truncation(self, size):
        raise NotImplementedError

    def entry(self, i, j):
        """Single entry; default goes through a truncation."""
        return self.truncation(max(i, j) + 1).entry(i, j)

    def diagonal_entry(self, k):
        return self.entry(k, k)

    def _check_size(self, size):
        if size < 1:
            raise SizeMismatch("truncation size must be >= 1")
        if self.max_size is not None and size > self.max_size:
            raise SizeMismatch(
                f"source {self.description!r} only provides size <= {self.max_size}"
            )


class MeasureSource(MatrixSource):
    """Moment matrices of a catalog measure, optionally disk-cached."""

    def __init__(self, spec, mode=EXACT, cache=None):
        self.spec = spec
        self.mode = mode
        self.description = format_measure(spec)
        self._cache = cache

    def truncation(self, size):
        self._check_size(size)
        if self._cache is not None:
            return self._cache.load_or_build(
                self.description,
                size,
                self.mode,
                lambda: moment_matrix(self.spec, size - 1, self.mode),
                entry_fn=self.entry,
            )
        return moment_matrix(self.spec, size - 1, self.mode)

    def entry(self, i, j):
        value = moment(self.spec, i, j)
        return value if self.mode == EXACT else to_complex(value)


class IdentitySource(MatrixSource):
    def __init__(self, mode=EXACT):
        self.mode = mode
        self.description = "identity"

    def truncation(self, size):
        self._check_size(size)
        return HermitianTruncation.identity(size, self.mode)

    def entry(self, i, j):
        if self.mode == EXACT:
            return EXACT_ONE if i == j else EXACT_ZERO
        return 1.0 + 0.0j if i == j else 0.0j


class FixedMatrixSource(MatrixSource):
    """Sections of one explicitly given truncation (size-limited)."""

    def __init__(self, matrix, description="matrix", mode=None):
        if mode is not None and mode != matrix.mode:
            if matrix.mode == FLOAT and mode == EXACT:
                raise ForbiddenConversion(
                    "a float matrix cannot serve an exact-mode source"
                )
            matrix = matrix.to_float()
        self.matrix = matrix
        self.mode = matrix.mode
        self.description = description
        self.max_size = matrix.size

    def truncation(self, size):
        self._check_size(size)
        return self.matrix.section(size)

    def entry(self, i, j):
        return self.matrix.entry(i, j)


class SumSource(MatrixSource):
    """Entry-wise sum of sources (used for tail-sum families)."""

    def __init__(self, sources, description=None):
        if not sources:
            raise SizeMismatch("sum of zero sources")
        self.sources = tuple(sources)
        self.mode = (
            EXACT if all(s.mode == EXACT for s in self.sources) else FLOAT
        )
        sizes = [s.max_size for s in self.sources if s.max_size is not None]
        self.max_size = min(sizes) if sizes else None
        self.description = description or (
            "(" + " + ".join(s.description for s in self.sources) + ")"
        )

    def truncation(self, size):
        self._check_size(size)
        parts = [s.truncation(size) for s in self.sources]
        if self.mode == FLOAT:
            parts = [p.to_float() for p in parts]
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total

    def entry(self, i, j):
        if self.mode == EXACT:
            total = EXACT_ZERO
            for s in self.sources:
                total = total + s.entry(i, j)
            return total
        return sum(to_complex(s.entry(i, j)) for s in self.sources)
