import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from sobspec.errors import InvalidDegree, InvalidInput, NotPositiveDefinite
from sobspec.exact_linalg import (
    FLAG_EXACT_REDUCED,
    LdlFactorization,
    cholesky_float,
    companion_roots,
    generalized_extreme_eigs,
    hermitian_eigs,
    invert_unit_lower_exact,
    ldl_decompose,
)
from sobspec.matrices import EXACT, HermitianTruncation
from sobspec.scalars import rational

from conftest import exact_diag, pascal_exact, random_exact_hpd, random_hpd_array, rc


# -- LDL ---------------------------------------------------------------------


def test_ldl_pascal_3x3_symbolic_elimination():
    m = pascal_exact(3)
    f = ldl_decompose(m)
    want_l = [[1, 0, 0], [1, 1, 0], [1, 2, 1]]
    for i in range(3):
        for j in range(3):
            assert f.lower[i][j] == want_l[i][j]
    assert list(f.diag) == [1, 1, 1]
    assert f.reconstruct().same_entries(m)


def test_ldl_identity():
    m = HermitianTruncation.identity(3)
    f = ldl_decompose(m)
    assert list(f.diag) == [1, 1, 1]
    assert f.reconstruct().same_entries(m)


def test_ldl_reports_first_nonpositive_pivot():
    m = HermitianTruncation.exact([[rc(1), rc(2)], [rc(2), rc(1)]])
    with pytest.raises(NotPositiveDefinite) as err:
        ldl_decompose(m)
    assert err.value.index == 1


def test_ldl_float_reconstruction_on_random_hpd():
    rng = np.random.default_rng(2)
    for n in (3, 8, 20):
        a = random_hpd_array(rng, n, shift=1e-3 * n)
        f = ldl_decompose(HermitianTruncation.floating(a))
        resid = np.max(np.abs(f.reconstruct().as_array() - a))
        assert resid <= 1e-11 * np.max(np.abs(a))


def test_ldl_exact_reconstruction_on_random_hpd():
    import random

    rng = random.Random(4)
    m = random_exact_hpd(rng, 6)
    f = ldl_decompose(m)
    assert f.reconstruct().same_entries(m)
    assert all(d > 0 for d in f.diag)


def test_unit_lower_inverse_is_exact_inverse():
    import random

    rng = random.Random(9)
    m = random_exact_hpd(rng, 5)
    f = ldl_decompose(m)
    inv = invert_unit_lower_exact(f.lower)
    for i in range(5):
        for j in range(5):
            acc = rc(0)
            for k in range(5):
                acc = acc + f.lower[i][k] * inv[k][j]
            assert acc == (rc(1) if i == j else rc(0))


# -- Cholesky ------------------------------------------------------------------


def test_cholesky_float_examples():
    d = HermitianTruncation.floating(np.diag([1.0, 0.25]))
    assert np.allclose(cholesky_float(d), np.diag([1.0, 0.5]))
    eye = HermitianTruncation.floating(np.eye(4))
    assert np.array_equal(cholesky_float(eye), np.eye(4))
    low = cholesky_float(pascal_exact(3).to_float())
    assert np.allclose(low, [[1, 0, 0], [1, 1, 0], [1, 2, 1]])


# -- standard eigenvalues ----------------------------------------------------------


def test_hermitian_eigs_examples():
    assert list(hermitian_eigs(np.diag([3.0, 1.0, 2.0]).astype(complex))) == [1, 2, 3]
    got = hermitian_eigs(np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex))
    # characteristic polynomial x^2 - 4x + 3 has roots 1 and 3
    assert got == pytest.approx([1.0, 3.0], abs=1e-14)
    assert list(hermitian_eigs(np.eye(5, dtype=complex))) == [1.0] * 5


def test_hermitian_eigs_requires_float_mode():
    with pytest.raises(InvalidInput):
        hermitian_eigs(pascal_exact(3))


def _charpoly_fractions(grid):
    """Faddeev-LeVerrier characteristic polynomial over Fraction."""
    n = len(grid)
    a = [[Fraction(x) for x in row] for row in grid]
    m = [[Fraction(0)] * n for _ in range(n)]
    coeffs = [Fraction(1)]  # leading term lambda^n
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k)/k
        prev = m
        m = [[sum(a[i][t] * prev[t][j] for t in range(n)) for j in range(n)]
             for i in range(n)]
        for i in range(n):
            m[i][i] += coeffs[-1]
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)]
              for i in range(n)]
        coeffs.append(Fraction(-1, k) * sum(am[i][i] for i in range(n)))
    return coeffs[::-1]  # ascending


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pascal_eigs_match_exact_characteristic_polynomial(n):
    grid = [[math.comb(i + j, i) for j in range(n + 1)] for i in range(n + 1)]
    coeffs = _charpoly_fractions(grid)
    evs = hermitian_eigs(np.array(grid, dtype=complex))
    for ev in evs:
        value = sum(float(c) * ev**k for k, c in enumerate(coeffs))
        assert abs(value) < 1e-8 * max(1.0, ev ** (n + 1))
    # reciprocal-pair structure: determinant 1 and extreme product 1
    assert float(coeffs[0]) == pytest.approx((-1) ** (n + 1), abs=0)
    assert evs[0] * evs[-1] == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("n", [6, 9, 12])
def test_pascal_extreme_product_stays_one(n):
    p = pascal_exact(n + 1).to_float()
    evs = hermitian_eigs(p)
    assert evs[0] * evs[-1] == pytest.approx(1.0, rel=1e-6)


# -- generalized eigenvalues ----------------------------------------------------------


def test_pencil_diagonal_example():
    a = exact_diag([rc(1), rc(rational(1, 4)), rc(rational(1, 16))])
    b = HermitianTruncation.identity(3)
    ext = generalized_extreme_eigs(a, b)
    assert ext.lambda_min == 0.0625
    assert ext.lambda_max == 1.0


def test_pencil_identical_pair():
    import random

    m = random_exact_hpd(random.Random(1), 4)
    ext = generalized_extreme_eigs(m, m)
    assert ext.lambda_min == pytest.approx(1.0, abs=1e-12)
    assert ext.lambda_max == pytest.approx(1.0, abs=1e-12)


def test_pencil_diagonal_ratios():
    a = exact_diag([rc(2), rc(8)])
    b = exact_diag([rc(1), rc(2)])
    ext = generalized_extreme_eigs(a, b)
    assert ext.lambda_min == pytest.approx(2.0, rel=1e-14)
    assert ext.lambda_max == pytest.approx(4.0, rel=1e-14)


def test_pencil_matches_scipy_oracle():
    rng = np.random.default_rng(21)
    for n in (2, 5, 9):
        a = random_hpd_array(rng, n)
        b = random_hpd_array(rng, n)
        ext = generalized_extreme_eigs(
            HermitianTruncation.floating(a), HermitianTruncation.floating(b)
        )
        want = scipy.linalg.eigh(a, b, eigvals_only=True)
        assert ext.lambda_min == pytest.approx(want[0], rel=1e-9, abs=1e-12)
        assert ext.lambda_max == pytest.approx(want[-1], rel=1e-9, abs=1e-12)


def test_pencil_inversion_duality():
    rng = np.random.default_rng(31)
    for n in (2, 6, 11):
        a = HermitianTruncation.floating(random_hpd_array(rng, n))
        b = HermitianTruncation.floating(random_hpd_array(rng, n))
        fwd = generalized_extreme_eigs(a, b)
        rev = generalized_extreme_eigs(b, a)
        assert fwd.lambda_max * rev.lambda_min == pytest.approx(1.0, rel=1e-9)


def test_pencil_scaling_is_exact_for_dyadic_factors():
    import random

    m = random_exact_hpd(random.Random(3), 5)
    b = random_exact_hpd(random.Random(4), 5)
    base = generalized_extreme_eigs(m, b)
    for c in (rational(1, 4), rational(8)):
        scaled = generalized_extreme_eigs(m.scale(c), b)
        assert scaled.lambda_min == float(c) * base.lambda_min
        assert scaled.lambda_max == float(c) * base.lambda_max
    general = generalized_extreme_eigs(m.scale(rational(3, 5)), b)
    assert general.lambda_max == pytest.approx(0.6 * base.lambda_max, rel=1e-12)


def test_pencil_requires_positive_definite_b():
    a = HermitianTruncation.floating(np.eye(2))
    b = HermitianTruncation.floating(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(NotPositiveDefinite):
        generalized_extreme_eigs(a, b)


def test_pencil_exact_reduction_engages_on_hostile_conditioning():
    p = pascal_exact(25)
    shifted = p.drop_first()
    base = p.section(24)
    ext = generalized_extreme_eigs(shifted, base)
    assert ext.flag == FLAG_EXACT_REDUCED
    assert ext.condition_estimate > 1e12
    # monomial witness: largest ratio of shifted to plain diagonal entries
    witness = max(
        math.comb(2 * (n + 1), n + 1) / math.comb(2 * n, n) for n in range(24)
    )
    assert ext.lambda_max >= witness - 1e-9


# -- companion roots --------------------------------------------------------------------


def test_companion_examples():
    assert companion_roots([rc(1), rc(-2), rc(1)]) == pytest.approx([1.0, 1.0])
    roots = companion_roots([rc(-1), rc(3), rc(-3), rc(1)])  # (z-1)^3
    assert all(abs(z - 1.0) < 1e-5 for z in roots)
    roots = companion_roots([rc(1), rc(0), rc(1)])  # z^2 + 1
    assert roots == pytest.approx([-1j, 1j])


def test_companion_product_of_roots_matches_constant_term():
    rng = np.random.default_rng(17)
    for deg in (3, 7, 15):
        roots = rng.standard_normal(deg) + 1j * rng.standard_normal(deg)
        coeffs = list(np.poly(roots)[::-1])
        got = companion_roots(coeffs)
        prod = 1.0 + 0.0j
        for z in got:
            prod *= z
        assert prod == pytest.approx((-1.0) ** deg * coeffs[0], rel=1e-8)


def test_companion_rejects_degree_zero_and_nonmonic():
    with pytest.raises(InvalidDegree):
        companion_roots([rc(5)])
    with pytest.raises(InvalidInput):
        companion_roots([rc(1), rc(2)])


def test_ldl_dataclass_size():
    f = LdlFactorization(EXACT, ((rc(1),),), (rational(1),))
    assert f.size == 1
