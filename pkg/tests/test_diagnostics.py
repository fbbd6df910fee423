import math
import random

import numpy as np
import pytest
import scipy.linalg

from sobspec import diagnostics as diag
from sobspec.errors import DenominatorVanishes, InvalidInput, NumericError
from sobspec.matrices import HermitianTruncation
from sobspec.measures import Circle, UnitCircleLebesgue, UnitDiskArea, WeightedCircle
from sobspec.scalars import rational, rational_str
from sobspec.sobolev import SobolevSource, SobolevSpec
from sobspec.sources import FixedMatrixSource, IdentitySource, MeasureSource, SumSource

from conftest import exact_diag, random_exact_hpd, rc

UNIT = MeasureSource(UnitCircleLebesgue())
HALF = MeasureSource(Circle(rc(0), rational(1, 2)))
PASCAL = MeasureSource(Circle(rc(1), 1))
COS_WEIGHT = WeightedCircle((rc(2), rc(rational(1, 2))))
# (2 + cos t)(1 + cos t / 2) = 9/4 + 2 cos t + cos 2t / 4
PRODUCT_WEIGHT = WeightedCircle((rc(rational(9, 4)), rc(1), rc(rational(1, 8))))


def example2_source():
    return SobolevSource(SobolevSpec([(PASCAL, 0), (UNIT, 1)]))


# -- trend rule ----------------------------------------------------------------


def test_trend_constant_is_bounded():
    ns = list(range(40))
    assert diag.classify_trend(ns, [3.0] * 40) == diag.TREND_BOUNDED


def test_trend_decreasing_is_bounded():
    ns = list(range(40))
    assert diag.classify_trend(ns, [4.0 ** -n for n in ns]) == diag.TREND_BOUNDED


def test_trend_polynomial_growth_is_growing():
    ns = list(range(1, 41))
    assert diag.classify_trend(ns, [(n + 1.0) ** 2 for n in ns]) == diag.TREND_GROWING


def test_trend_slow_drift_is_inconclusive():
    ns = list(range(1, 61))
    values = [10.0 + math.log(n + 2) for n in ns]
    assert diag.classify_trend(ns, values) == diag.TREND_INCONCLUSIVE


def test_normalize_range():
    assert diag.normalize_range((0, 3)) == [0, 1, 2, 3]
    assert diag.normalize_range([5, 2, 9]) == [2, 5, 9]
    with pytest.raises(InvalidInput):
        diag.normalize_range((-1, 2))
    with pytest.raises(InvalidInput):
        diag.normalize_range([])


# -- eigenvalue sequences ----------------------------------------------------------


def test_eigen_sequence_diagonal_scaling_is_exact():
    seq = diag.eigen_sequence(HALF, UNIT, (0, 20))
    for row in seq.rows:
        assert row.beta == 1.0
        assert row.lam == 4.0 ** -row.n
    assert seq.trend_beta == diag.TREND_BOUNDED


def test_eigen_sequence_identical_sources():
    src = MeasureSource(COS_WEIGHT)
    seq = diag.eigen_sequence(src, src, (0, 8))
    for row in seq.rows:
        assert row.lam == pytest.approx(1.0, abs=1e-12)
        assert row.beta == pytest.approx(1.0, abs=1e-12)


def test_eigen_sequence_semidefinite_shift_keeps_beta_below_one():
    base = example2_source()
    seq = diag.eigen_sequence(PASCAL, base, (0, 10))
    assert all(row.beta <= 1.0 + 1e-9 for row in seq.rows)


def test_eigen_sequence_matches_scipy_per_section():
    rng = random.Random(6)
    a = random_exact_hpd(rng, 8)
    b = random_exact_hpd(rng, 8)
    seq = diag.eigen_sequence(
        FixedMatrixSource(a, "a"), FixedMatrixSource(b, "b"), (0, 7)
    )
    for row in seq.rows:
        k = row.n + 1
        want = scipy.linalg.eigh(
            a.section(k).as_array(), b.section(k).as_array(), eigvals_only=True
        )
        assert row.lam == pytest.approx(want[0], rel=1e-9, abs=1e-12)
        assert row.beta == pytest.approx(want[-1], rel=1e-9, abs=1e-12)


def test_eigen_sequence_monotone_in_n():
    rng = random.Random(8)
    a = random_exact_hpd(rng, 10)
    b = random_exact_hpd(rng, 10)
    seq = diag.eigen_sequence(
        FixedMatrixSource(a, "a"), FixedMatrixSource(b, "b"), (0, 9)
    )
    for prev, cur in zip(seq.rows, seq.rows[1:]):
        assert cur.lam <= prev.lam + 1e-9
        assert cur.beta >= prev.beta - 1e-9


def test_eigen_sequence_duality():
    rng = random.Random(14)
    a = FixedMatrixSource(random_exact_hpd(rng, 9), "a")
    b = FixedMatrixSource(random_exact_hpd(rng, 9), "b")
    fwd = diag.eigen_sequence(a, b, (0, 8))
    rev = diag.eigen_sequence(b, a, (0, 8))
    for rf, rr in zip(fwd.rows, rev.rows):
        assert rf.beta * rr.lam == pytest.approx(1.0, rel=1e-8)


# -- ratio test ----------------------------------------------------------------------


def test_ratio_sequence_example2_exact():
    seq = diag.ratio_sequence(example2_source(), (0, 3))
    assert [rational_str(v) for _, v in seq.rows] == ["3", "10/3", "29/10", "86/29"]


def test_ratio_sequence_identity():
    seq = diag.ratio_sequence(IdentitySource(), (0, 10))
    assert all(v == 1 for _, v in seq.rows)
    assert seq.trend == diag.TREND_BOUNDED


def test_ratio_sequence_growing():
    diag_matrix = exact_diag([rc(math.factorial(n)) for n in range(24)])
    src = FixedMatrixSource(diag_matrix, "factorial-diagonal")
    seq = diag.ratio_sequence(src, (0, 22))
    assert [float(v) for _, v in seq.rows][:3] == [1.0, 2.0, 3.0]
    assert seq.trend == diag.TREND_GROWING


def test_ratio_sequence_rejects_bad_diagonal():
    src = FixedMatrixSource(exact_diag([rc(1), rc(-1)]), "bad")
    with pytest.raises(InvalidInput):
        diag.ratio_sequence(src, (0, 0))


# -- restricted multiplication norms ---------------------------------------------------


def test_multnorm_identity_is_exactly_one():
    seq = diag.multnorm_sequence(IdentitySource(), (0, 30))
    assert all(row.d == 1.0 for row in seq.rows)


def test_multnorm_scaled_diagonal_is_half():
    seq = diag.multnorm_sequence(HALF, (0, 12))
    for row in seq.rows:
        assert row.d == pytest.approx(0.5, abs=1e-12)


def test_multnorm_pascal_grows_toward_hull_radius():
    seq = diag.multnorm_sequence(PASCAL, (0, 20))
    values = seq.values
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert values[-1] > 1.96
    assert values[-1] < 2.0
    assert seq.rows[-1].flag == "exact-reduced"


def test_multnorm_witness_bound():
    for src in (PASCAL, MeasureSource(COS_WEIGHT), example2_source()):
        seq = diag.multnorm_sequence(src, (0, 12))
        for row in seq.rows:
            ratio = float(
                src.diagonal_entry(row.n + 1).re / src.diagonal_entry(row.n).re
            )
            assert row.d**2 >= ratio - 1e-9


def test_multnorm_matches_direct_pencil():
    src = MeasureSource(COS_WEIGHT)
    seq = diag.multnorm_sequence(src, (0, 6))
    for row in seq.rows:
        k = row.n + 1
        full = src.truncation(k + 1)
        a = full.drop_first().to_float().as_array()
        b = full.section(k).to_float().as_array()
        want = scipy.linalg.eigh(a, b, eigvals_only=True)[-1]
        assert row.d == pytest.approx(math.sqrt(want), rel=1e-10)


# -- domination ---------------------------------------------------------------------------


def test_domination_example1_constant_one():
    report = diag.domination_check([UNIT, HALF], 20)
    assert report.observed_constant == 1.0
    assert report.trend == diag.TREND_BOUNDED


def test_domination_identical_pair():
    src = MeasureSource(COS_WEIGHT)
    report = diag.domination_check([src, src], 10)
    assert report.observed_constant == pytest.approx(1.0, abs=1e-12)


def test_domination_density_pair_bounded_by_density_sup():
    base = MeasureSource(COS_WEIGHT)
    upper = MeasureSource(PRODUCT_WEIGHT)
    report = diag.domination_check([base, upper], 20)
    assert report.observed_constant <= 1.5 + 1e-8
    assert report.trend == diag.TREND_BOUNDED


def test_domination_needs_two_sources():
    with pytest.raises(InvalidInput):
        diag.domination_check([UNIT], 5)


def test_density_sup_caps_pencil_beta():
    # beta_n for (M(w1 d_theta), M(w0 d_theta)) is capped by sup(w1/w0)
    base = MeasureSource(COS_WEIGHT)
    upper = MeasureSource(PRODUCT_WEIGHT)
    _, sup = diag.esd_density_check(PRODUCT_WEIGHT, COS_WEIGHT)
    seq = diag.eigen_sequence(upper, base, (0, 15))
    for row in seq.rows:
        assert row.beta <= sup + 1e-8


# -- density extrema ------------------------------------------------------------------------


def test_esd_density_identical_weights():
    lo, hi = diag.esd_density_check(COS_WEIGHT, COS_WEIGHT)
    assert lo == pytest.approx(1.0, abs=1e-12)
    assert hi == pytest.approx(1.0, abs=1e-12)


def test_esd_density_against_flat_weight():
    flat = WeightedCircle((rc(1),))
    lo, hi = diag.esd_density_check(COS_WEIGHT, flat)
    assert (lo, hi) == (pytest.approx(1.0, abs=1e-9), pytest.approx(3.0, abs=1e-9))
    lo, hi = diag.esd_density_check(flat, COS_WEIGHT)
    assert (lo, hi) == (pytest.approx(1 / 3, abs=1e-9), pytest.approx(1.0, abs=1e-9))


def test_esd_density_denominator_vanishes():
    touching = WeightedCircle((rc(1), rc(rational(1, 2))))  # 1 + cos reaches 0
    with pytest.raises(DenominatorVanishes):
        diag.esd_density_check(COS_WEIGHT, touching)


def test_weight_extrema_cosine():
    lo, hi = diag.weight_extrema(COS_WEIGHT)
    assert lo == pytest.approx(1.0, abs=1e-9)
    assert hi == pytest.approx(3.0, abs=1e-9)


# -- combined bound ---------------------------------------------------------------------------


def test_combined_norm_bound_values():
    assert diag.combined_norm_bound([1.0], [1.0, 1.0]) == pytest.approx(math.sqrt(5))
    assert diag.combined_norm_bound([], [1.5]) == 1.5
    assert diag.combined_norm_bound([1.0], [1.0, 0.5]) == pytest.approx(math.sqrt(13 / 4))


def test_combined_norm_bound_validation():
    with pytest.raises(InvalidInput):
        diag.combined_norm_bound([1.0], [1.0])
    with pytest.raises(InvalidInput):
        diag.combined_norm_bound([-1.0], [1.0, 1.0])
    with pytest.raises(InvalidInput):
        diag.combined_norm_bound([1.0], [1.0, 0.0])


# -- tail sums ---------------------------------------------------------------------------------


def test_tail_sums_example1_family():
    report = diag.tail_sum_family([UNIT, HALF], 20, domination_constant=1.0)
    first, second = report.pairs
    assert first.sup_beta <= 2.0 + 1e-9
    assert first.bound == 2.0
    assert first.within_bound
    assert second.sup_beta == pytest.approx(1.0, abs=1e-12)
    for pair in report.pairs:
        assert pair.inf_lambda >= 1.0 - 1e-9


def test_tail_sums_equal_pair_doubles():
    src = MeasureSource(COS_WEIGHT)
    report = diag.tail_sum_family([src, src], 8, domination_constant=1.0)
    first = report.pairs[0]
    assert first.sup_beta == pytest.approx(2.0, abs=1e-9)
    assert first.inf_lambda == pytest.approx(2.0, abs=1e-9)


def test_tail_sums_raise_on_wrong_constant():
    src = MeasureSource(COS_WEIGHT)
    with pytest.raises(NumericError):
        diag.tail_sum_family([src, src], 8, domination_constant=0.5)


def test_sum_source_addition():
    total = SumSource([UNIT, HALF])
    m = total.truncation(3)
    assert m.entry(0, 0) == 2
    assert m.entry(2, 2) == rc(1) + rc(rational(1, 16))
    assert total.entry(1, 1) == rc(1) + rc(rational(1, 4))


# -- support geometry -----------------------------------------------------------------------------


def test_hull_containment_examples():
    assert diag.hull_containment(Circle(rc(0), rational(1, 2)), UnitCircleLebesgue())
    assert not diag.hull_containment(UnitCircleLebesgue(), Circle(rc(0), rational(1, 2)))
    assert diag.hull_containment(Circle(rc(1), 1), Circle(rc(1), 1))


def test_support_relations():
    half = Circle(rc(0), rational(1, 2))
    unit = UnitCircleLebesgue()
    assert diag.support_relation(half, unit) == "disjoint"
    assert diag.support_relation(unit, unit) == "equal"
    assert diag.support_relation(Circle(rc(1), 1), unit) == "overlapping"
    assert diag.support_relation(half, UnitDiskArea()) == "nested"
    assert diag.support_relation(Circle(rc(5), 1), unit) == "disjoint"


# -- two-term criteria -------------------------------------------------------------------------------


def test_two_term_criterion_scaled_diagonal():
    report = diag.two_term_identity_check(HALF, diag.AS_DERIVATIVE_TERM, 10)
    assert all(row.beta == 1.0 for row in report.rows)
    assert report.verdict == diag.VERDICT_BOUNDED


def test_two_term_criterion_pascal_base_is_inconclusive():
    report = diag.two_term_identity_check(PASCAL, diag.AS_BASE_TERM, 8)
    assert report.rows[-1].lam < 1e-4
    assert report.verdict == diag.VERDICT_INCONCLUSIVE


def test_two_term_criterion_cosine_weight_both_roles():
    src = MeasureSource(COS_WEIGHT)
    for which in (diag.AS_DERIVATIVE_TERM, diag.AS_BASE_TERM):
        report = diag.two_term_identity_check(src, which, 15)
        assert report.verdict == diag.VERDICT_BOUNDED
        assert report.weight_range == (
            pytest.approx(1.0, abs=1e-9),
            pytest.approx(3.0, abs=1e-9),
        )
    seq = report.rows
    assert all(row.lam >= 1.0 - 1e-9 for row in seq)
    assert all(row.beta <= 3.0 + 1e-9 for row in seq)


def test_two_term_criterion_rejects_unknown_role():
    with pytest.raises(InvalidInput):
        diag.two_term_identity_check(HALF, "sideways", 4)


# -- finite zero bound consistency ----------------------------------------------------------------


def test_zero_moduli_stay_under_restricted_norms():
    from sobspec.orthopoly import monic_orthogonal_family, zeros

    for src in (PASCAL, MeasureSource(COS_WEIGHT), example2_source()):
        fam = monic_orthogonal_family(src.truncation(11), 10, src.description)
        report = zeros(fam, range(1, 11))
        norms = diag.multnorm_sequence(src, (0, 9))
        d_by_n = {row.n: row.d for row in norms.rows}
        for n in range(1, 11):
            assert report.max_modulus[n] < d_by_n[n - 1] + 1e-7
