"""Derivative operators and matrix Sobolev inner products.

The inner product of two polynomials p, q against a family of Hermitian
matrices {M_j} with derivative orders j is

    sum_j  <p^(j), q^(j)>_{M_j}

and the assembled matrix for it applies the banded derivative operator on
both sides of each component.  Because the operator is lower banded, the
truncation of the assembled matrix equals the assembly of truncations;
tests pin that down.
"""

import math
from dataclasses import dataclass

import numpy as np

from sobspec.errors import InvalidInput, SizeMismatch
from sobspec.matrices import EXACT, FLOAT, HermitianTruncation
from sobspec.scalars import EXACT_ZERO, RationalComplex, as_exact, to_complex
from sobspec.sources import MatrixSource


class Polynomial:
    """Coefficient list, index k = coefficient of z^k, trailing zeros trimmed."""

    __slots__ = ("mode", "coeffs")

    def __init__(self, mode, coeffs):
        if mode not in (EXACT, FLOAT):
            raise InvalidInput(f"unknown scalar mode {mode!r}")
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def exact(cls, coeffs):
        return cls(EXACT, [as_exact(c) for c in coeffs])

    @classmethod
    def floating(cls, coeffs):
        return cls(FLOAT, [complex(c) for c in coeffs])

    @classmethod
    def zero(cls, mode=EXACT):
        return cls(mode, [])

    @classmethod
    def monomial(cls, k, mode=EXACT):
        if mode == EXACT:
            return cls.exact([0] * k + [1])
        return cls.floating([0.0] * k + [1.0])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def differentiate(self, order=1):
        """Formal derivative of the given order."""
        if order < 0:
            raise InvalidInput("derivative order must be >= 0")
        if order == 0:
            return self
        if order > self.degree:
            return Polynomial(self.mode, [])
        out = []
        for k in range(len(self.coeffs) - order):
            factor = math.perm(k + order, order)
            out.append(self.coeffs[k + order] * factor)
        return Polynomial(self.mode, out)

    def float_coeffs(self):
        return [to_complex(c) for c in self.coeffs]

    def evaluate(self, z):
        """Horner evaluation at a complex point (always in float)."""
        z = complex(z)
        acc = 0.0j
        for c in reversed(self.float_coeffs()):
            acc = acc * z + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.mode == other.mode and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.mode, self.coeffs))

    def __repr__(self):
        return f"Polynomial({self.mode}, {list(self.coeffs)!r})"


@dataclass(frozen=True)
class DerivativeOperator:
    """Banded operator with entry (n, n-j) equal to n!/(n-j)!.

    Its conjugate-transpose action on coefficient vectors is j-fold formal
    differentiation; applied on both sides of a matrix it produces the
    derivative term of the assembled inner product.
    """

    order: int
    size: int

    def __post_init__(self):
        if self.order < 0 or self.size < 1:
            raise InvalidInput("derivative operator needs order >= 0, size >= 1")

    def factor(self, n):
        """n!/(n-j)! for n >= j, else 0."""
        return math.perm(n, self.order) if n >= self.order else 0

    def entry(self, n, m):
        return self.factor(n) if n - m == self.order else 0

    def as_array(self):
        out = np.zeros((self.size, self.size))
        for n in range(self.order, self.size):
            out[n, n - self.order] = self.factor(n)
        return out

    def apply_adjoint_to_coeffs(self, poly):
        """Coefficients of the order-j derivative, padded/truncated to size."""
        dp = poly.differentiate(self.order)
        coeffs = list(dp.coeffs[: self.size])
        pad = EXACT_ZERO if poly.mode == EXACT else 0.0j
        coeffs += [pad] * (self.size - len(coeffs))
        return coeffs


def derivative_operator(order, size):
    return DerivativeOperator(order, size)


# -- specs -------------------------------------------------------------------


@dataclass(frozen=True)
class SobolevComponent:
    source: MatrixSource
    order: int


class SobolevSpec:
    """Ordered components (matrix source, derivative order).

    Orders are distinct and the smallest is 0; the order-0 source must be
    positive definite, which is what makes the assembled form an inner
    product.  Orders above 0 may skip values.
    """

    def __init__(self, components):
        comps = sorted(
            (SobolevComponent(c[0], int(c[1])) if not isinstance(c, SobolevComponent) else c
             for c in components),
            key=lambda c: c.order,
        )
        if not comps:
            raise InvalidInput("a Sobolev spec needs at least one component")
        orders = [c.order for c in comps]
        if any(o < 0 for o in orders):
            raise InvalidInput("derivative orders must be >= 0")
        if len(set(orders)) != len(orders):
            raise InvalidInput(f"derivative orders must be distinct: {orders}")
        if orders[0] != 0:
            raise InvalidInput("the smallest derivative order must be 0 "
                               "(otherwise constants would have zero norm)")
        self.components = tuple(comps)
        self.mode = EXACT if all(c.source.mode == EXACT for c in comps) else FLOAT
        self._check_order0_definite()

    def _check_order0_definite(self):
        # Smoke check on a small section; full positivity surfaces at the
        # factorization stage of whatever size is actually used.
        source = self.components[0].source
        probe = 4 if source.max_size is None else min(4, source.max_size)
        from sobspec.exact_linalg import ldl_decompose

        ldl_decompose(source.truncation(probe))  # raises NotPositiveDefinite

    @property
    def orders(self):
        return [c.order for c in self.components]

    @property
    def description(self):
        inner = ",".join(
            f"{c.source.description}:order={c.order}" for c in self.components
        )
        return f"sobolev({inner})"

    def __repr__(self):
        return f"<SobolevSpec {self.description}>"


def sobolev_matrix(spec, n, mode=None):
    """Assembled truncation of the matrix Sobolev inner product.

    Entry (i, k) is the sum over components of
    factor_j(i) * factor_j(k) * M_j[i - j, k - j].
    """
    if n < 0:
        raise InvalidInput("degree bound must be >= 0")
    mode = mode or spec.mode
    if mode == EXACT and spec.mode != EXACT:
        raise InvalidInput("cannot assemble exactly from float components")
    size = n + 1
    if mode == EXACT:
        grid = [[EXACT_ZERO] * size for _ in range(size)]
        for comp in spec.components:
            o = comp.order
            if o >= size:
                continue
            sub = comp.source.truncation(size - o)
            rows = sub.rows()
            for i in range(o, size):
                fi = math.perm(i, o)
                gi = grid[i]
                ri = rows[i - o]
                for k in range(o, size):
                    gi[k] = gi[k] + ri[k - o] * (fi * math.perm(k, o))
        return HermitianTruncation.exact(grid, check=False)
    total = np.zeros((size, size), dtype=np.complex128)
    for comp in spec.components:
        o = comp.order
        if o >= size:
            continue
        sub = comp.source.truncation(size - o).to_float().as_array()
        lam = np.array([math.perm(i, o) for i in range(o, size)], dtype=float)
        total[o:, o:] += np.outer(lam, lam) * sub
    return HermitianTruncation.floating(total, check=False)


def sobolev_entry(spec, i, k):
    """Single assembled entry, without building a truncation."""
    exact = spec.mode == EXACT
    total = EXACT_ZERO if exact else 0.0j
    for comp in spec.components:
        o = comp.order
        if i < o or k < o:
            continue
        factor = math.perm(i, o) * math.perm(k, o)
        base = comp.source.entry(i - o, k - o)
        total = total + base * factor
    return total


class SobolevSource(MatrixSource):
    """A Sobolev spec viewed as a matrix source for the diagnostics."""

    def __init__(self, spec, mode=None):
        self.spec = spec
        self.mode = mode or spec.mode
        self.description = spec.description
        sizes = [
            c.source.max_size + c.order
            for c in spec.components
            if c.source.max_size is not None
        ]
        self.max_size = min(sizes) if sizes else None

    def truncation(self, size):
        self._check_size(size)
        return sobolev_matrix(self.spec, size - 1, self.mode)

    def entry(self, i, j):
        value = sobolev_entry(self.spec, i, j)
        return value if self.mode == EXACT else to_complex(value)


# -- inner products ------------------------------------------------------------


def inner_product(p, q, matrix):
    """v M w* for coefficient vectors v of p and w of q."""
    if max(p.degree, q.degree) >= matrix.size:
        raise SizeMismatch(
            f"matrix of size {matrix.size} cannot pair degrees "
            f"{p.degree} and {q.degree}"
        )
    exact = matrix.mode == EXACT and p.mode == EXACT and q.mode == EXACT
    if exact:
        total = EXACT_ZERO
        rows = matrix.rows()
        for i, vi in enumerate(p.coeffs):
            if not vi:
                continue
            row = rows[i]
            for j, wj in enumerate(q.coeffs):
                if wj:
                    total = total + vi * row[j] * wj.conjugate()
        return total
    v = np.array(p.float_coeffs(), dtype=np.complex128)
    w = np.array(q.float_coeffs(), dtype=np.complex128)
    arr = matrix.to_float().as_array()
    if len(v) == 0 or len(w) == 0:
        return 0.0j
    return complex(v @ arr[: len(v), : len(w)] @ w.conj())


def sobolev_inner_product_direct(p, q, spec):
    """Sum of component inner products of formal derivatives.

    Agrees exactly (in exact mode) with inner_product against
    sobolev_matrix; the two routes are kept separate so they can check
    each other.
    """
    exact = spec.mode == EXACT and p.mode == EXACT and q.mode == EXACT
    total = EXACT_ZERO if exact else 0.0j
    for comp in spec.components:
        dp = p.differentiate(comp.order)
        dq = q.differentiate(comp.order)
        if dp.is_zero() or dq.is_zero():
            continue
        size = max(dp.degree, dq.degree) + 1
        term = inner_product(dp, dq, comp.source.truncation(size))
        total = total + term
    return total


def parse_component_text(text):
    """Split 'source-spec:order=j' into (source text, order or None)."""
    if ":order=" in text:
        head, tail = text.rsplit(":order=", 1)
        try:
            order = int(tail)
        except ValueError:
            raise InvalidInput(f"bad derivative order {tail!r} in {text!r}") from None
        return head, order
    return text, None
