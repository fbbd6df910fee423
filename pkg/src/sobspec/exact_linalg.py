"""Factorizations, eigensolvers, and companion-matrix root finding.

Everything here is a pure function over immutable truncations.  Exact-mode
inputs are factored in rational arithmetic with no rounding; float-mode
inputs go through the kernel lane (compiled or pure, see sobspec.kernels).

The generalized eigensolver reduces the definite pencil (A, B) to a
standard Hermitian problem with B's factorization.  When B is exact and
its float condition estimate exceeds a threshold (default 1e12), the
reduction is done in exact arithmetic and only the reduced matrix is
rounded; this is what keeps binomial-type matrices usable far beyond the
reach of double-precision Cholesky.
"""

import math
from dataclasses import dataclass

import numpy as np

from sobspec import kernels
from sobspec.errors import (
    InvalidDegree,
    InvalidInput,
    NotPositiveDefinite,
    SizeMismatch,
)
from sobspec.matrices import EXACT, FLOAT, HermitianTruncation
from sobspec.scalars import EXACT_ONE, EXACT_ZERO, RationalComplex, as_exact, to_complex

FLOAT_PIVOT_RTOL = 1e-13
CONDITION_THRESHOLD = 1e12

FLAG_OK = ""
FLAG_ILL_CONDITIONED = "ill-conditioned"
FLAG_EXACT_REDUCED = "exact-reduced"


@dataclass(frozen=True)
class LdlFactorization:
    """H = L diag(D) L* with unit-lower L and real positive D."""

    mode: str
    lower: object  # exact: tuple of row tuples; float: complex ndarray
    diag: object  # exact: tuple of rationals; float: float ndarray

    @property
    def size(self):
        return len(self.diag)

    def reconstruct(self):
        """L diag(D) L* as a truncation (exactly in exact mode)."""
        n = self.size
        if self.mode == EXACT:
            rows = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = EXACT_ZERO
                    for k in range(min(i, j) + 1):
                        acc = acc + self.lower[i][k] * self.lower[j][k].conjugate() * self.diag[k]
                    row.append(acc)
                rows.append(row)
            return HermitianTruncation.exact(rows, check=False)
        low = self.lower
        return HermitianTruncation.floating(
            (low * self.diag) @ low.conj().T, check=False
        )


def _div_real(value, d):
    # RationalComplex divided by a positive rational.
    return RationalComplex._make(value.re / d, value.im / d)


def _ldl_exact(rows):
    n = len(rows)
    low = [[EXACT_ZERO] * n for _ in range(n)]
    diag = []
    for j in range(n):
        pivot = rows[j][j].re
        for k in range(j):
            pivot = pivot - low[j][k].abs2() * diag[k]
        if pivot <= 0:
            raise NotPositiveDefinite(j)
        diag.append(pivot)
        low[j][j] = EXACT_ONE
        for i in range(j + 1, n):
            acc = rows[i][j]
            for k in range(j):
                acc = acc - low[i][k] * low[j][k].conjugate() * diag[k]
            low[i][j] = _div_real(acc, pivot)
    return tuple(tuple(row) for row in low), tuple(diag)


def _ldl_float(arr, rel_tol=FLOAT_PIVOT_RTOL):
    n = arr.shape[0]
    low = np.eye(n, dtype=np.complex128)
    diag = np.zeros(n)
    max_diag = float(np.max(np.real(np.diagonal(arr)))) if n else 0.0
    threshold = rel_tol * max_diag if max_diag > 0.0 else 0.0
    for j in range(n):
        pivot = arr[j, j].real - float(np.sum(np.abs(low[j, :j]) ** 2 * diag[:j]))
        if pivot <= threshold:
            raise NotPositiveDefinite(j)
        diag[j] = pivot
        if j + 1 < n:
            low[j + 1:, j] = (
                arr[j + 1:, j] - (low[j + 1:, :j] * diag[:j]) @ low[j, :j].conj()
            ) / pivot
    return low, diag


def ldl_decompose(matrix):
    """LDL* factorization; positivity of D is the HPD certificate.

    Raises NotPositiveDefinite with the index of the first bad pivot
    (exact sign test in exact mode, scale-relative tolerance in float).
    """
    if matrix.mode == EXACT:
        low, diag = _ldl_exact(matrix.rows())
        return LdlFactorization(EXACT, low, diag)
    low, diag = _ldl_float(matrix.as_array())
    return LdlFactorization(FLOAT, low, diag)


def cholesky_float(matrix, rel_tol=FLOAT_PIVOT_RTOL):
    """Lower Cholesky factor of a float-mode truncation."""
    arr = matrix.as_array() if isinstance(matrix, HermitianTruncation) else matrix
    return kernels.cholesky_lower(arr, rel_tol)


def hermitian_eigs(matrix, max_sweeps=100):
    """Ascending eigenvalues of a float-mode Hermitian truncation."""
    if isinstance(matrix, HermitianTruncation):
        if matrix.mode != FLOAT:
            raise InvalidInput("hermitian_eigs requires a float-mode matrix; "
                               "convert explicitly with to_float()")
        arr = matrix.as_array()
    else:
        arr = np.asarray(matrix, dtype=np.complex128)
    return kernels.jacobi_eigvals(arr, max_sweeps)


# -- definite pencils -----------------------------------------------------


@dataclass(frozen=True)
class PencilExtremes:
    lambda_min: float
    lambda_max: float
    condition_estimate: float
    flag: str = FLAG_OK


@dataclass(frozen=True)
class ReducedPencil:
    """Float Hermitian matrix whose spectrum equals the pencil's."""

    matrix: np.ndarray
    condition_estimate: float
    flag: str


def _solve_unit_lower(low, rhs):
    """x with L x = rhs for exact unit-lower L; row-major lists throughout."""
    x = [list(row) for row in rhs]
    n = len(x)
    for i in range(n):
        xi = x[i]
        li = low[i]
        for k in range(i):
            lik = li[k]
            if lik:
                xk = x[k]
                for j in range(len(xi)):
                    xi[j] = xi[j] - lik * xk[j]
    return x


def _conj_transpose(rows):
    n = len(rows)
    m = len(rows[0])
    return [[rows[i][j].conjugate() for i in range(n)] for j in range(m)]


def invert_unit_lower_exact(low):
    """Rows of L^{-1} for an exact unit-lower-triangular grid."""
    n = len(low)
    inv = [[EXACT_ZERO] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = EXACT_ONE
        for i in range(j + 1, n):
            acc = EXACT_ZERO
            for k in range(j, i):
                if low[i][k]:
                    acc = acc - low[i][k] * inv[k][j]
            inv[i][j] = acc
    return tuple(tuple(row) for row in inv)


def _reduce_exact(a_matrix, b_matrix):
    low, diag = _ldl_exact(b_matrix.rows())
    y = _solve_unit_lower(low, [list(r) for r in a_matrix.rows()])
    w = _conj_transpose(_solve_unit_lower(low, _conj_transpose(y)))
    n = len(w)
    scale = [math.sqrt(float(d)) for d in diag]
    out = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            out[i, j] = complex(w[i][j]) / (scale[i] * scale[j])
    return 0.5 * (out + out.conj().T)


def _reduce_float(a_arr, low):
    y = np.linalg.solve(low, a_arr)
    c = np.linalg.solve(low, y.conj().T).conj().T
    return 0.5 * (c + c.conj().T)


def reduce_pencil(a_matrix, b_matrix, cond_threshold=CONDITION_THRESHOLD,
                  max_sweeps=100):
    """Reduce the Hermitian definite pencil (A, B) to standard form.

    Returns a ReducedPencil whose float matrix has the pencil's
    generalized eigenvalues, plus B's condition estimate and a flag:
    exact-reduced when the exact LDL path was taken, ill-conditioned when
    the float path was used beyond the condition threshold.
    """
    if a_matrix.size != b_matrix.size:
        raise SizeMismatch("pencil matrices must have equal size")
    b_arr = b_matrix.to_float().as_array()
    try:
        evs = kernels.jacobi_eigvals(b_arr, max_sweeps)
        cond = math.inf if evs[0] <= 0.0 else float(evs[-1] / evs[0])
    except Exception:
        cond = math.inf
    both_exact = a_matrix.mode == EXACT and b_matrix.mode == EXACT
    if both_exact and cond > cond_threshold:
        return ReducedPencil(_reduce_exact(a_matrix, b_matrix), cond,
                             FLAG_EXACT_REDUCED)
    a_arr = a_matrix.to_float().as_array()
    try:
        low = kernels.cholesky_lower(b_arr)
    except NotPositiveDefinite:
        if both_exact:
            return ReducedPencil(_reduce_exact(a_matrix, b_matrix), cond,
                                 FLAG_EXACT_REDUCED)
        raise
    flag = FLAG_ILL_CONDITIONED if cond > cond_threshold else FLAG_OK
    return ReducedPencil(_reduce_float(a_arr, low), cond, flag)


def generalized_extreme_eigs(a_matrix, b_matrix,
                             cond_threshold=CONDITION_THRESHOLD,
                             max_sweeps=100):
    """Smallest and largest generalized eigenvalue of the pencil (A, B).

    B must be positive definite.  The extremes equal the min/max of the
    Rayleigh quotient vAv*/vBv* over nonzero v.
    """
    reduced = reduce_pencil(a_matrix, b_matrix, cond_threshold, max_sweeps)
    evs = kernels.jacobi_eigvals(reduced.matrix, max_sweeps)
    return PencilExtremes(float(evs[0]), float(evs[-1]),
                          reduced.condition_estimate, reduced.flag)


# -- polynomial roots ------------------------------------------------------


def _quadratic_roots(c0, c1):
    # z^2 + c1 z + c0, numerically stable complex form.
    disc = np.sqrt(complex(c1 * c1 - 4.0 * c0))
    if (c1.conjugate() * disc).real > 0.0:
        disc = -disc
    q = -0.5 * (c1 - disc)
    if q == 0.0:
        return [0.0j, 0.0j]
    return [q, c0 / q]


def companion_matrix(coeffs_float):
    """Companion matrix (upper Hessenberg) of a monic float polynomial."""
    deg = len(coeffs_float) - 1
    comp = np.zeros((deg, deg), dtype=np.complex128)
    for i in range(1, deg):
        comp[i, i - 1] = 1.0
    for i in range(deg):
        comp[i, deg - 1] = -coeffs_float[i]
    return comp


def companion_roots(monic_coeffs, max_iter=40):
    """All roots, with multiplicity, of a monic polynomial.

    Coefficients are ascending; the leading coefficient must be one.
    Roots come from balanced companion-matrix eigenvalues and are sorted
    by (real, imag) for deterministic output.
    """
    coeffs = [to_complex(c) for c in monic_coeffs]
    if len(coeffs) < 2:
        raise InvalidDegree("root finding requires degree >= 1")
    if abs(coeffs[-1] - 1.0) > 1e-12:
        raise InvalidInput("leading coefficient must be 1 (monic)")
    deg = len(coeffs) - 1
    if deg == 1:
        return [-coeffs[0]]
    if deg == 2:
        roots = _quadratic_roots(coeffs[0], coeffs[1])
    else:
        comp = kernels.balance(companion_matrix(coeffs))
        roots = list(kernels.hessenberg_eigvals(comp, max_iter))
    return [complex(z) for z in np.sort_complex(np.array(roots))]
