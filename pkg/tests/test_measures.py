import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobspec.errors import InvalidInput, ParseError, UnsupportedMeasure
from sobspec.exact_linalg import ldl_decompose
from sobspec.measures import (
    Circle,
    UnitCircleLebesgue,
    UnitDiskArea,
    WeightedCircle,
    WeightedSum,
    format_measure,
    hull,
    moment,
    moment_matrix,
    parse_measure,
    quadrature_moment_oracle,
    support_primitives,
    weight_values,
)
from sobspec.scalars import rational, rational_str

from conftest import rc

UNIT = UnitCircleLebesgue()
HALF = Circle(rc(0), rational(1, 2))
SHIFTED = Circle(rc(1), 1)
DISK = UnitDiskArea()
COS_WEIGHT = WeightedCircle((rc(2), rc(rational(1, 2))))  # 2 + cos(theta)
LEAVES = (UNIT, HALF, SHIFTED, DISK, COS_WEIGHT)


# -- closed-form moments -----------------------------------------------------


def test_unit_circle_moments_are_kronecker():
    assert moment(UNIT, 3, 3) == 1
    assert moment(UNIT, 3, 2) == 0


def test_half_circle_diagonal_powers():
    for n in range(6):
        assert moment(HALF, n, n) == rc(rational(1, 4**n))
    assert moment(HALF, 2, 1) == 0


def test_shifted_circle_gives_binomials():
    assert moment(SHIFTED, 2, 1) == 3  # C(3, 2)
    for n in range(16):
        for m in range(16):
            assert moment(SHIFTED, n, m) == math.comb(n + m, n)


def test_disk_moment_against_quadrature_oracle():
    oracle = quadrature_moment_oracle(DISK, 2, 2, 4096)
    assert oracle == pytest.approx(1 / 3, abs=1e-12)
    assert moment(DISK, 2, 2) == rc(rational(1, 3))
    assert moment(DISK, 2, 1) == 0


def test_weighted_circle_picks_fourier_coefficient():
    assert moment(COS_WEIGHT, 0, 0) == 2
    assert moment(COS_WEIGHT, 0, 1) == rc(rational(1, 2))
    assert moment(COS_WEIGHT, 1, 0) == rc(rational(1, 2))
    assert moment(COS_WEIGHT, 0, 2) == 0


def test_weighted_sum_moments_combine():
    mix = WeightedSum(((rational(1, 2), UNIT), (rational(1, 2), HALF)))
    assert moment(mix, 1, 1) == rc(rational(1, 2)) * 1 + rc(rational(1, 2)) * rc(
        rational(1, 4)
    )


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(LEAVES),
    st.integers(min_value=0, max_value=8),
    st.integers(min_value=0, max_value=8),
)
def test_moments_are_conjugate_symmetric(spec, n, m):
    assert moment(spec, n, m) == moment(spec, m, n).conjugate()


# -- matrices -------------------------------------------------------------------


def test_moment_matrix_examples():
    pascal = moment_matrix(SHIFTED, 4)
    for i in range(5):
        for j in range(5):
            assert pascal.entry(i, j) == math.comb(i + j, i)
    eye = moment_matrix(UNIT, 9)
    assert eye.same_entries(type(eye).identity(10))
    toeplitz = moment_matrix(COS_WEIGHT, 2)
    assert toeplitz.entry(0, 0) == 2
    assert toeplitz.entry(0, 1) == rc(rational(1, 2))
    assert toeplitz.entry(0, 2) == 0
    for i in range(3):
        for j in range(3):
            oracle = quadrature_moment_oracle(COS_WEIGHT, i, j, 1024)
            got = complex(toeplitz.entry(i, j))
            assert got == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("spec", [UNIT, HALF, SHIFTED, DISK, COS_WEIGHT])
def test_moment_matrices_are_positive_definite(spec):
    matrix = moment_matrix(spec, 20)
    factor = ldl_decompose(matrix)  # raises NotPositiveDefinite on failure
    assert all(d > 0 for d in factor.diag)


def test_float_mode_matrix_rounds_entries():
    m = moment_matrix(HALF, 3, mode="float")
    assert m.mode == "float"
    assert m.entry(2, 2) == complex(1 / 16)


# -- quadrature oracle -------------------------------------------------------------


def test_oracle_matches_closed_forms_on_leaves():
    for spec in LEAVES:
        for n in range(5):
            for m in range(5):
                got = quadrature_moment_oracle(spec, n, m, 1024)
                want = complex(moment(spec, n, m))
                assert got == pytest.approx(want, abs=1e-10)


def test_oracle_examples():
    assert quadrature_moment_oracle(SHIFTED, 2, 2, 4096) == pytest.approx(
        6.0, abs=1e-10
    )
    assert abs(quadrature_moment_oracle(UNIT, 1, 0, 256)) < 1e-12
    assert quadrature_moment_oracle(DISK, 1, 1, 4096) == pytest.approx(
        0.5, abs=1e-8
    )


def test_oracle_rejects_sums_and_tiny_grids():
    mix = WeightedSum(((rational(1), UNIT),))
    with pytest.raises(UnsupportedMeasure):
        quadrature_moment_oracle(mix, 0, 0, 256)
    with pytest.raises(InvalidInput):
        quadrature_moment_oracle(UNIT, 0, 0, 32)


# -- hulls and supports ---------------------------------------------------------------


def test_hull_examples():
    h = hull(SHIFTED)
    assert (h.center, h.radius, h.sup_abs) == (1 + 0j, 1.0, 2.0)
    assert hull(UNIT).sup_abs == 1.0
    assert hull(HALF).sup_abs == 0.5
    assert hull(DISK).sup_abs == 1.0


def test_weighted_sum_hull_contains_components():
    mix = WeightedSum(((rational(1, 2), HALF), (rational(1, 2), SHIFTED)))
    merged = hull(mix)
    assert merged.contains(hull(HALF))
    assert merged.contains(hull(SHIFTED))
    # two-disk merge is tight: diameter endpoints at -1/2 and 2
    assert merged.radius == pytest.approx(1.25)
    assert merged.center == pytest.approx(0.75 + 0j)


def test_support_primitives():
    assert support_primitives(HALF) == (("circle", 0j, 0.5),)
    assert support_primitives(DISK) == (("disk", 0j, 1.0),)
    mix = WeightedSum(((rational(1), UNIT), (rational(1), HALF)))
    assert len(support_primitives(mix)) == 2


# -- validation ------------------------------------------------------------------------


def test_weight_must_be_nonnegative_on_grid():
    with pytest.raises(InvalidInput):
        WeightedCircle((rc(1), rc(1)))  # 1 + 2cos dips to -1


def test_weight_leading_coefficient_checks():
    with pytest.raises(InvalidInput):
        WeightedCircle((rc(0, 1),))
    with pytest.raises(InvalidInput):
        WeightedCircle((rc(-2),))


def test_circle_radius_must_be_positive():
    with pytest.raises(InvalidInput):
        Circle(rc(0), 0)


def test_weight_values_match_cosine():
    values = weight_values(COS_WEIGHT, 8)
    for k, theta in enumerate(2 * math.pi * i / 8 for i in range(8)):
        assert values[k] == pytest.approx(2 + math.cos(theta), abs=1e-12)


# -- text syntax --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    [
        "unit-circle",
        "disk-area",
        "circle:1,0,1",
        "circle:-1/2,3/4,2/7",
        "wcircle:2;1/2,0",
        "wcircle:9/4;1,0;1/8,0",
        "sum:1/2*unit-circle+1/2*circle:0,0,1/2",
    ],
)
def test_parse_format_round_trip(text):
    spec = parse_measure(text)
    assert format_measure(spec) == text
    assert parse_measure(format_measure(spec)) == spec


def test_parse_errors_name_the_token():
    with pytest.raises(ParseError, match="lemniscate"):
        parse_measure("lemniscate:1")
    with pytest.raises(ParseError, match="2/x"):
        parse_measure("circle:2/x,0,1")
    with pytest.raises(ParseError, match="nested"):
        parse_measure("sum:1*sum:1*unit-circle")
    with pytest.raises(ParseError):
        parse_measure("circle:1,0")


def test_rational_str_canonical():
    assert rational_str(rational(4, 8)) == "1/2"
    assert rational_str(rational(-4, 2)) == "-2"
