"""Boundedness diagnostics for the multiplication operator p(z) -> z p(z).

Everything here reports finite-section evidence: generalized-eigenvalue
sequences of definite pencils, diagonal moment ratios, restricted
multiplication norms, sequential-domination constants, tail-sum
comparability, disk-hull containment, and weight extrema.  True limits
are never claimed; each sequence carries an explicit trend label
(bounded-looking / growing / inconclusive) computed by a fixed rule over
the last quartile of rows.
"""

import math
from dataclasses import dataclass, field

from sobspec.errors import (
    DenominatorVanishes,
    InvalidInput,
    NumericError,
)
from sobspec.exact_linalg import reduce_pencil
from sobspec.kernels import jacobi_eigvals
from sobspec.matrices import EXACT
from sobspec.measures import (
    WeightedCircle,
    hull,
    support_primitives,
    weight_function,
    weight_values,
)
from sobspec.sources import IdentitySource, MeasureSource, SumSource

TREND_BOUNDED = "bounded-looking"
TREND_GROWING = "growing"
TREND_INCONCLUSIVE = "inconclusive"

MONOTONE_SLACK = 1e-9
_GRID_POINTS = 4096


def normalize_range(n_range):
    """Accept (lo, hi), range, or an iterable of ints; return sorted list."""
    if isinstance(n_range, tuple) and len(n_range) == 2:
        lo, hi = n_range
        ns = list(range(int(lo), int(hi) + 1))
    else:
        ns = sorted(int(n) for n in n_range)
    if not ns or ns[0] < 0:
        raise InvalidInput(f"bad truncation range: {n_range!r}")
    return ns


def classify_trend(ns, values):
    """Fixed trend rule over the last quartile of a positive sequence.

    Total increase below 1% of the final value reads as bounded-looking;
    a log-log slope above 0.2 reads as growing; anything else is
    inconclusive.  The rule is a report label, not a limit claim.
    """
    vals = [float(v) for v in values]
    if len(vals) < 2:
        return TREND_INCONCLUSIVE
    start = min(max((3 * len(vals)) // 4, 0), len(vals) - 2)
    tail = vals[start:]
    tail_ns = [float(n) for n in ns[start:]]
    increase = tail[-1] - tail[0]
    scale = abs(tail[-1])
    if increase < 0.01 * scale or scale == 0.0:
        return TREND_BOUNDED
    if any(v <= 0.0 for v in tail):
        return TREND_INCONCLUSIVE
    xs = [math.log(n + 1.0) for n in tail_ns]
    ys = [math.log(v) for v in tail]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    if sxx == 0.0:
        return TREND_INCONCLUSIVE
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sxx
    return TREND_GROWING if slope > 0.2 else TREND_INCONCLUSIVE


# -- generalized eigenvalue sequences -----------------------------------------


@dataclass(frozen=True)
class EigenRow:
    n: int
    lam: float
    beta: float
    b_condition: float
    flag: str


@dataclass(frozen=True)
class EigenSequence:
    a_description: str
    b_description: str
    rows: tuple
    trend_lambda: str
    trend_beta: str

    @property
    def sup_beta(self):
        return max(r.beta for r in self.rows)

    @property
    def inf_lambda(self):
        return min(r.lam for r in self.rows)


def _assert_monotone(rows):
    for prev, cur in zip(rows, rows[1:]):
        if prev.flag or cur.flag:
            continue
        if cur.lam > prev.lam + MONOTONE_SLACK or cur.beta < prev.beta - MONOTONE_SLACK:
            raise NumericError(
                f"pencil extremes lost monotonicity between n={prev.n} and n={cur.n}"
            )


def eigen_sequence(a_source, b_source, n_range, max_sweeps=100):
    """Extreme generalized eigenvalues of (A_n, B_n) over a range of n.

    The pencil is reduced once at the largest size; leading sections of
    the reduced matrix are the reduced sections, so each row is one
    Hermitian eigensolve.  Rows carry B's per-size condition estimate and
    the reduction flag ('' / ill-conditioned / exact-reduced).
    """
    ns = normalize_range(n_range)
    top = ns[-1] + 1
    a_full = a_source.truncation(top)
    b_full = b_source.truncation(top)
    reduced = reduce_pencil(a_full, b_full, max_sweeps=max_sweeps)
    b_float = b_full.to_float().as_array()
    rows = []
    for n in ns:
        section = reduced.matrix[: n + 1, : n + 1]
        evs = jacobi_eigvals(section, max_sweeps)
        try:
            b_evs = jacobi_eigvals(b_float[: n + 1, : n + 1], max_sweeps)
            b_cond = math.inf if b_evs[0] <= 0.0 else float(b_evs[-1] / b_evs[0])
        except NumericError:
            b_cond = math.inf
        flag = reduced.flag
        rows.append(EigenRow(n, float(evs[0]), float(evs[-1]), b_cond, flag))
    seq = EigenSequence(
        a_source.description,
        b_source.description,
        tuple(rows),
        trend_lambda=classify_trend(ns, [max(r.lam, 1e-300) for r in rows]),
        trend_beta=classify_trend(ns, [r.beta for r in rows]),
    )
    _assert_monotone(seq.rows)
    return seq


# -- diagonal ratio test -------------------------------------------------------


@dataclass(frozen=True)
class RatioSequence:
    description: str
    rows: tuple  # (n, ratio)  ratio is rational in exact mode, float otherwise
    trend: str


def ratio_sequence(source, n_range):
    """Consecutive diagonal ratios c[n+1, n+1] / c[n, n], exact when possible."""
    ns = normalize_range(n_range)
    diag = {}
    for n in range(ns[-1] + 2):
        value = source.diagonal_entry(n)
        if source.mode == EXACT:
            if value.im or value.re <= 0:
                raise InvalidInput(f"diagonal entry {n} is not a positive real")
            diag[n] = value.re
        else:
            value = complex(value)
            if value.real <= 0:
                raise InvalidInput(f"diagonal entry {n} is not a positive real")
            diag[n] = value.real
    rows = tuple((n, diag[n + 1] / diag[n]) for n in ns)
    return RatioSequence(
        source.description,
        rows,
        classify_trend(ns, [float(r) for _, r in rows]),
    )


# -- restricted multiplication norms --------------------------------------------


@dataclass(frozen=True)
class MultNormRow:
    n: int
    d: float
    flag: str


@dataclass(frozen=True)
class MultNormSequence:
    description: str
    rows: tuple
    trend: str

    @property
    def values(self):
        return [r.d for r in self.rows]


def multnorm_sequence(source, n_range, max_sweeps=100):
    """Norm of multiplication by z restricted to degrees <= n, per n.

    d_n^2 is the largest generalized eigenvalue of the pencil whose top is
    the moment matrix shifted by one row and column (the Gram matrix of
    z*p) against the unshifted truncation.  The values are non-decreasing
    lower bounds for the full operator norm.
    """
    ns = normalize_range(n_range)
    top = ns[-1] + 2
    full = source.truncation(top)
    shifted = full.drop_first()
    base = full.section(top - 1)
    reduced = reduce_pencil(shifted, base, max_sweeps=max_sweeps)
    rows = []
    for n in ns:
        evs = jacobi_eigvals(reduced.matrix[: n + 1, : n + 1], max_sweeps)
        rows.append(MultNormRow(n, math.sqrt(max(float(evs[-1]), 0.0)), reduced.flag))
    for prev, cur in zip(rows, rows[1:]):
        if cur.d < prev.d - MONOTONE_SLACK:
            raise NumericError(
                f"restricted multiplication norms decreased between "
                f"n={prev.n} and n={cur.n}"
            )
    return MultNormSequence(
        source.description,
        tuple(rows),
        classify_trend(ns, [r.d for r in rows]),
    )


# -- sequential domination -------------------------------------------------------


@dataclass(frozen=True)
class DominationPair:
    index: int  # j, comparing M_j against M_{j-1}
    rows: tuple  # EigenRow
    observed_constant: float
    trend: str


@dataclass(frozen=True)
class DominationReport:
    pairs: tuple
    observed_constant: float
    trend: str

    def bounded_looking(self):
        return all(p.trend == TREND_BOUNDED for p in self.pairs)


def domination_check(family, n_max, max_sweeps=100):
    """Evidence for M_j <= C M_{j-1} across adjacent pairs of a family.

    The observed constant is the sup of computed largest generalized
    eigenvalues; the trend label says whether the sequences look bounded.
    This is evidence over finite sections, never a proof.
    """
    family = list(family)
    if len(family) < 2:
        raise InvalidInput("domination check needs at least two sources")
    pairs = []
    for j in range(1, len(family)):
        seq = eigen_sequence(family[j], family[j - 1], (0, n_max), max_sweeps)
        pairs.append(
            DominationPair(j, seq.rows, seq.sup_beta, seq.trend_beta)
        )
    return DominationReport(
        tuple(pairs),
        max(p.observed_constant for p in pairs),
        TREND_BOUNDED
        if all(p.trend == TREND_BOUNDED for p in pairs)
        else (
            TREND_GROWING
            if any(p.trend == TREND_GROWING for p in pairs)
            else TREND_INCONCLUSIVE
        ),
    )


# -- density and weight extrema ----------------------------------------------------


def _golden_refine(fn, center, halfwidth, minimize, iterations=90):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a = center - halfwidth
    b = center + halfwidth
    sign = 1.0 if minimize else -1.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = sign * fn(c)
    fd = sign * fn(d)
    for _ in range(iterations):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = sign * fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = sign * fn(d)
    x = 0.5 * (a + b)
    return fn(x)


def _grid_extrema(fn, grid_values, points):
    step = 2.0 * math.pi / points
    i_min = int(min(range(points), key=lambda i: grid_values[i]))
    i_max = int(max(range(points), key=lambda i: grid_values[i]))
    lo = min(
        float(grid_values[i_min]),
        _golden_refine(fn, i_min * step, step, minimize=True),
    )
    hi = max(
        float(grid_values[i_max]),
        _golden_refine(fn, i_max * step, step, minimize=False),
    )
    return lo, hi


def weight_extrema(weighted_circle, points=_GRID_POINTS):
    """(min, max) of a circle weight on a grid plus golden-section polish."""
    values = weight_values(weighted_circle, points)
    return _grid_extrema(weight_function(weighted_circle), values, points)


def esd_density_check(w_num, w_den, points=_GRID_POINTS):
    """Extrema of the density ratio w_num / w_den on the unit circle.

    A finite sup is the domination mechanism for weighted circles: the
    largest generalized eigenvalue of the corresponding moment pencil is
    at most ess sup of the ratio.
    """
    if not isinstance(w_num, WeightedCircle) or not isinstance(w_den, WeightedCircle):
        raise InvalidInput("density check needs two weighted circles")
    num = weight_values(w_num, points)
    den = weight_values(w_den, points)
    tiny = 1e-12 * max(1.0, float(w_den.fourier[0].re))
    if float(den.min()) <= tiny:
        raise DenominatorVanishes(
            f"denominator weight reaches {float(den.min()):.3e} on the grid"
        )
    fn_num = weight_function(w_num)
    fn_den = weight_function(w_den)
    return _grid_extrema(lambda t: fn_num(t) / fn_den(t), num / den, points)


# -- combined operator-norm bound ---------------------------------------------------


def combined_norm_bound(domination_constants, multiplication_norms):
    """Radius bounding every zero of the combined family's polynomials.

    Takes C_j for orders j = 1..k and operator norms for orders 0..k
    (consecutive orders; one more norm than constants) and returns

        sqrt(D_0^2 + sum_j (j^2 C_j + D_j^2 + 2 j sqrt(C_j) D_j)).

    The square bounds the norm of multiplication by z in the combined
    inner product whenever the component norms and constants are valid.
    """
    constants = [float(c) for c in domination_constants]
    norms = [float(d) for d in multiplication_norms]
    if len(norms) != len(constants) + 1:
        raise InvalidInput(
            "need one multiplication norm per order 0..k and one constant "
            "per order 1..k"
        )
    if any(c <= 0 for c in constants) or any(d <= 0 for d in norms):
        raise InvalidInput("constants and norms must be positive")
    total = norms[0] ** 2
    for j, (c, d) in enumerate(zip(constants, norms[1:]), start=1):
        total += j * j * c + d * d + 2.0 * j * math.sqrt(c) * d
    return math.sqrt(total)


# -- tail sums (comparability) ---------------------------------------------------------


@dataclass(frozen=True)
class TailSumPair:
    index: int
    rows: tuple  # EigenRow of (M'_j, M_j)
    sup_beta: float
    inf_lambda: float
    bound: float | None
    within_bound: bool | None


@dataclass(frozen=True)
class TailSumReport:
    pairs: tuple
    constant: float | None


def tail_sum_family(family, n_max, domination_constant=None, max_sweeps=100):
    """Compare tail sums M'_j = M_j + ... + M_k against M_j.

    Always checks the lower side (tail sums dominate their first term, so
    every smallest eigenvalue is >= 1).  When a domination constant C is
    supplied, the upper side is checked against 1 + C + ... + C^(k-j).
    """
    family = list(family)
    if len(family) < 2:
        raise InvalidInput("tail sums need at least two sources")
    k = len(family) - 1
    pairs = []
    for j in range(k + 1):
        tail = family[j] if j == k else SumSource(family[j:])
        seq = eigen_sequence(tail, family[j], (0, n_max), max_sweeps)
        bound = None
        within = None
        if domination_constant is not None:
            c = float(domination_constant)
            bound = 1.0 + sum(c**i for i in range(1, k - j + 1))
            within = seq.sup_beta <= bound + MONOTONE_SLACK
            if not within:
                raise NumericError(
                    f"tail sum {j} exceeded its domination bound: "
                    f"{seq.sup_beta} > {bound}"
                )
        if seq.inf_lambda < 1.0 - MONOTONE_SLACK:
            raise NumericError(
                f"tail sum {j} lost its lower comparability bound: "
                f"lambda={seq.inf_lambda}"
            )
        pairs.append(
            TailSumPair(j, seq.rows, seq.sup_beta, seq.inf_lambda, bound, within)
        )
    return TailSumReport(tuple(pairs), domination_constant)


# -- support geometry ------------------------------------------------------------------


def hull_containment(inner_spec, outer_spec, tol=1e-12):
    """Disk-in-disk test between the support hulls of two catalog measures."""
    return hull(outer_spec).contains(hull(inner_spec), tol=tol)


def support_relation(inner_spec, outer_spec, tol=1e-9):
    """Geometric relation of supports: equal/nested/disjoint/overlapping.

    Only single-primitive catalog supports are classified; anything else
    comes back 'unknown'.
    """
    inner = support_primitives(inner_spec)
    outer = support_primitives(outer_spec)
    if len(inner) != 1 or len(outer) != 1:
        return "unknown"
    (kind_i, ci, ri), (kind_o, co, ro) = inner[0], outer[0]
    gap = abs(ci - co)
    if kind_i == "circle" and kind_o == "circle":
        if gap <= tol and abs(ri - ro) <= tol:
            return "equal"
        if gap > ri + ro + tol or gap < abs(ri - ro) - tol:
            return "disjoint"
        return "overlapping"
    if kind_o == "disk":
        if gap + ri <= ro + tol:
            return "nested"
        if gap > ri + ro + tol:
            return "disjoint"
        return "overlapping"
    # disk inside a circle curve cannot happen for positive-area disks
    return "disjoint" if gap > ri + ro + tol else "overlapping"


# -- two-term criteria against the identity ------------------------------------------------


AS_DERIVATIVE_TERM = "as-derivative-term"
AS_BASE_TERM = "as-base-term"

VERDICT_BOUNDED = "zeros-bounded"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TwoTermReport:
    which: str
    rows: tuple  # EigenRow against the identity
    trend: str
    verdict: str
    weight_range: tuple | None = None


def two_term_identity_check(source, which, n_max, max_sweeps=100):
    """Two-component criterion where one component is the identity.

    as-derivative-term: the source sits under the derivative; a bounded
    largest-eigenvalue sequence is the zeros-bounded evidence.
    as-base-term: the source is the order-0 component; the smallest
    eigenvalues must stay away from zero, so the trend of their
    reciprocals is what is classified.

    For weighted-circle sources the weight extrema are reported as the
    same criterion in density form (finite sup / positive inf).
    """
    if which not in (AS_DERIVATIVE_TERM, AS_BASE_TERM):
        raise InvalidInput(f"unknown role {which!r}")
    seq = eigen_sequence(source, IdentitySource(source.mode), (0, n_max), max_sweeps)
    ns = [r.n for r in seq.rows]
    if which == AS_DERIVATIVE_TERM:
        trend = classify_trend(ns, [r.beta for r in seq.rows])
        verdict = VERDICT_BOUNDED if trend == TREND_BOUNDED else VERDICT_INCONCLUSIVE
    else:
        lams = [r.lam for r in seq.rows]
        if any(v <= 0.0 for v in lams):
            trend = TREND_GROWING
        else:
            trend = classify_trend(ns, [1.0 / v for v in lams])
        verdict = VERDICT_BOUNDED if trend == TREND_BOUNDED else VERDICT_INCONCLUSIVE
    weight_range = None
    if isinstance(source, MeasureSource) and isinstance(source.spec, WeightedCircle):
        weight_range = weight_extrema(source.spec)
    return TwoTermReport(which, seq.rows, trend, verdict, weight_range)
