"""Monic and orthonormal polynomial families from an HPD truncation.

The monic family comes from the LDL* factorization of the moment matrix:
coefficients of the degree-n polynomial are row n of the inverse unit
lower factor, and its squared norm is the n-th pivot.  All exact work
stays monic with unrooted squared norms; square roots appear only in the
float orthonormalization.

Zeros are computed through balanced companion matrices with one Newton
polish per root.  For exact families the polynomial is first split into
exact square-free factors (Yun's algorithm over the rationals), so
multiple roots - which no float companion solve can cluster tightly - are
located through their well-conditioned square-free part and reported with
the correct multiplicity.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from sobspec.errors import InvalidInput, SizeMismatch
from sobspec.exact_linalg import (
    companion_roots,
    invert_unit_lower_exact,
    ldl_decompose,
)
from sobspec.matrices import EXACT, FLOAT
from sobspec.scalars import EXACT_ONE, EXACT_ZERO
from sobspec.sobolev import Polynomial


@dataclass(frozen=True)
class OrthoFamily:
    """Monic orthogonal polynomials and their squared norms, degrees 0..N."""

    mode: str
    monic: tuple  # Polynomial per degree
    norms_sq: tuple  # h_n > 0 (rational in exact mode, float otherwise)
    source_description: str = "matrix"

    @property
    def max_degree(self):
        return len(self.monic) - 1


def monic_orthogonal_family(matrix, max_degree, description="matrix"):
    """Gram-Schmidt on monomials, realized through the LDL* factorization."""
    if matrix.size < max_degree + 1:
        raise SizeMismatch(
            f"matrix of size {matrix.size} cannot produce degree {max_degree}"
        )
    section = matrix.section(max_degree + 1)
    factor = ldl_decompose(section)
    if matrix.mode == EXACT:
        inv = invert_unit_lower_exact(factor.lower)
        polys = [Polynomial.exact(inv[n][: n + 1]) for n in range(max_degree + 1)]
        return OrthoFamily(EXACT, tuple(polys), tuple(factor.diag), description)
    inv = np.linalg.solve(factor.lower, np.eye(max_degree + 1, dtype=np.complex128))
    polys = [Polynomial.floating(inv[n, : n + 1]) for n in range(max_degree + 1)]
    return OrthoFamily(FLOAT, tuple(polys), tuple(float(d) for d in factor.diag),
                       description)


def orthonormalize(family):
    """Float coefficient vectors of the orthonormal family.

    Each vector is monic over sqrt(h_n), so the leading coefficient is
    positive real, which pins the family down uniquely.
    """
    out = []
    for poly, h in zip(family.monic, family.norms_sq):
        scale = 1.0 / math.sqrt(float(h))
        out.append(np.array(poly.float_coeffs(), dtype=np.complex128) * scale)
    return out


def evaluate(poly, z):
    """Horner evaluation at a complex point."""
    return poly.evaluate(z)


# -- exact polynomial arithmetic (coefficient lists of RationalComplex) -----


def _trim(coeffs):
    out = list(coeffs)
    while out and not out[-1]:
        out.pop()
    return out


def _derivative(coeffs):
    return _trim([coeffs[k] * k for k in range(1, len(coeffs))])


def _monic(coeffs):
    coeffs = _trim(coeffs)
    if not coeffs:
        return []
    lead = coeffs[-1]
    if lead == EXACT_ONE:
        return coeffs
    return [c / lead for c in coeffs]


def _divmod_exact(num, den):
    num = _trim(num)
    den = _trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quotient = [EXACT_ZERO] * max(len(num) - len(den) + 1, 0)
    rem = list(num)
    lead = den[-1]
    while len(rem) >= len(den) and _trim(rem):
        rem = _trim(rem)
        if len(rem) < len(den):
            break
        shift = len(rem) - len(den)
        q = rem[-1] / lead
        quotient[shift] = q
        for i, d in enumerate(den):
            rem[shift + i] = rem[shift + i] - q * d
        rem.pop()
    return _trim(quotient), _trim(rem)


def _exact_divide(num, den):
    q, r = _divmod_exact(num, den)
    if r:
        raise InvalidInput("exact polynomial division left a remainder")
    return q


def _gcd_monic(a, b):
    a = _monic(a)
    b = _monic(b)
    while b:
        _, r = _divmod_exact(a, b)
        a, b = b, _monic(r)
    return a if a else []


def squarefree_factors(coeffs):
    """Yun decomposition p = prod f_i^i into monic square-free factors.

    Returns [(factor coefficients, multiplicity)] with factors of degree
    >= 1 only; requires exact coefficients.
    """
    f = _monic(coeffs)
    if len(f) <= 1:
        return []
    df = _derivative(f)
    g = _gcd_monic(f, df)
    if len(g) <= 1:
        return [(f, 1)]
    out = []
    c = _exact_divide(f, g)
    d = [x - y for x, y in _pad_pair(_exact_divide(df, g), _derivative(c))]
    d = _trim(d)
    mult = 1
    while len(c) > 1:
        a = _gcd_monic(c, d) if d else _monic(c)
        if len(a) > 1:
            out.append((a, mult))
        c = _exact_divide(c, a) if len(a) > 1 else c
        if len(a) <= 1:
            a = [EXACT_ONE]
        d = [x - y for x, y in _pad_pair(_exact_divide(d, a) if d else [], _derivative(c))]
        d = _trim(d)
        mult += 1
    return out


def _pad_pair(a, b):
    width = max(len(a), len(b))
    a = list(a) + [EXACT_ZERO] * (width - len(a))
    b = list(b) + [EXACT_ZERO] * (width - len(b))
    return zip(a, b)


# -- zeros -------------------------------------------------------------------


def _horner_pair(coeffs, z):
    p = 0.0j
    dp = 0.0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _newton_polish(coeffs, root):
    p, dp = _horner_pair(coeffs, root)
    if dp == 0.0:
        return root
    candidate = root - p / dp
    p2, _ = _horner_pair(coeffs, candidate)
    return candidate if abs(p2) < abs(p) else root


@dataclass
class ZeroReport:
    """Roots per degree, with residuals and (after checking) bounds."""

    degrees: list
    roots: dict = field(default_factory=dict)  # degree -> list of complex
    residuals: dict = field(default_factory=dict)
    max_modulus: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    ok: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    polish_tolerance: float = 1e-6


def zeros(family, degrees):
    """Roots of the monic polynomials for the requested degrees.

    Exact families are deflated by exact square-free factorization first;
    float families report balanced companion roots as they come.  One
    Newton polish per root either way.
    """
    degrees = list(degrees)
    report = ZeroReport(degrees=degrees)
    for n in degrees:
        if n < 0 or n > family.max_degree:
            raise SizeMismatch(f"degree {n} outside family range 0..{family.max_degree}")
        poly = family.monic[n]
        roots = []
        if n > 0:
            if family.mode == EXACT:
                for fac, mult in squarefree_factors(list(poly.coeffs)):
                    fac_floats = [complex(c) for c in fac]
                    fac_roots = companion_roots(fac_floats)
                    fac_roots = [_newton_polish(fac_floats, z) for z in fac_roots]
                    roots.extend(list(fac_roots) * mult)
            else:
                coeffs = poly.float_coeffs()
                roots = [_newton_polish(coeffs, z) for z in companion_roots(coeffs)]
            roots = [complex(z) for z in np.sort_complex(np.array(roots))]
        if len(roots) != n:
            raise InvalidInput(f"degree {n} produced {len(roots)} roots")
        report.roots[n] = roots
        coeffs = poly.float_coeffs()
        report.residuals[n] = [abs(_horner_pair(coeffs, z)[0]) for z in roots]
        report.max_modulus[n] = max((abs(z) for z in roots), default=0.0)
    return report


ZERO_BOUND_SLACK = 1e-9


def zero_bound_check(report, radii):
    """Check every root against a per-degree radius.

    ``radii`` maps degree -> radius (dict, or a sequence aligned with the
    report's degrees).  A root fails when its modulus is at or above
    radius - 1e-9; failures are recorded in the report's violations.
    """
    if not isinstance(radii, dict):
        radii = dict(zip(report.degrees, radii))
    passed = {}
    for n in report.degrees:
        radius = float(radii[n])
        if radius <= 0:
            raise InvalidInput("bound radii must be positive")
        report.bounds[n] = radius
        bad = [z for z in report.roots[n] if abs(z) >= radius - ZERO_BOUND_SLACK]
        for z in bad:
            report.violations.append((n, z))
        ok = not bad
        report.ok[n] = ok
        passed[n] = ok
    return passed
