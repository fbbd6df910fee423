"""Catalog of planar measures with closed-form moments.

Every catalog measure has exact rational moments c[n, m] = integral of
z^n conj(z)^m, so moment matrices can be assembled with no quadrature
error.  A trigonometric quadrature oracle is provided as an independent
cross-check for tests.

Variants
--------
UnitCircleLebesgue   normalized arc length on |z| = 1 (moment matrix I)
Circle(a, r)         normalized arc length on |z - a| = r
WeightedCircle(a_k)  w(theta) dtheta / 2pi on |z| = 1, w a trig polynomial
UnitDiskArea         normalized area on |z| <= 1
WeightedSum          positive rational combination of the above
"""

import math
from dataclasses import dataclass

import numpy as np

from sobspec.errors import InvalidInput, ParseError, UnsupportedMeasure
from sobspec.matrices import EXACT, HermitianTruncation
from sobspec.scalars import (
    EXACT_ZERO,
    RationalComplex,
    as_exact,
    rational,
    rational_str,
)

WEIGHT_GRID_POINTS = 4096
_WEIGHT_GRID_TOL = 1e-12


@dataclass(frozen=True)
class UnitCircleLebesgue:
    def __str__(self):
        return "unit-circle"


@dataclass(frozen=True)
class Circle:
    center: RationalComplex
    radius: object  # positive rational

    def __post_init__(self):
        object.__setattr__(self, "center", as_exact(self.center))
        object.__setattr__(self, "radius", rational(self.radius))
        if self.radius <= 0:
            raise InvalidInput("circle radius must be positive")

    def __str__(self):
        c = self.center
        return f"circle:{rational_str(c.re)},{rational_str(c.im)},{rational_str(self.radius)}"


@dataclass(frozen=True)
class WeightedCircle:
    """Weight w(theta) = sum a_k e^{ik theta}; stores a_0..a_K, a_{-k} = conj(a_k)."""

    fourier: tuple

    def __post_init__(self):
        coeffs = tuple(as_exact(a) for a in self.fourier)
        if not coeffs:
            raise InvalidInput("weighted circle needs at least a_0")
        object.__setattr__(self, "fourier", coeffs)
        a0 = coeffs[0]
        if a0.im or a0.re <= 0:
            raise InvalidInput("a_0 must be a positive real rational")
        values = weight_values(self, WEIGHT_GRID_POINTS)
        floor = -_WEIGHT_GRID_TOL * max(1.0, float(a0.re))
        if float(np.min(values)) < floor:
            raise InvalidInput(
                f"weight is negative on the {WEIGHT_GRID_POINTS}-point grid "
                f"(min {float(np.min(values)):.3e})"
            )

    @property
    def bandwidth(self):
        return len(self.fourier) - 1

    def coefficient(self, k):
        """a_k for any integer k (conjugate symmetry below zero)."""
        if abs(k) > self.bandwidth:
            return EXACT_ZERO
        return self.fourier[k] if k >= 0 else self.fourier[-k].conjugate()

    def __str__(self):
        parts = [rational_str(self.fourier[0].re)]
        parts += [
            f"{rational_str(a.re)},{rational_str(a.im)}" for a in self.fourier[1:]
        ]
        return "wcircle:" + ";".join(parts)


@dataclass(frozen=True)
class UnitDiskArea:
    def __str__(self):
        return "disk-area"


@dataclass(frozen=True)
class WeightedSum:
    parts: tuple  # of (positive rational weight, measure)

    def __post_init__(self):
        parts = tuple((rational(w), spec) for w, spec in self.parts)
        if not parts:
            raise InvalidInput("weighted sum needs at least one component")
        for w, _ in parts:
            if w <= 0:
                raise InvalidInput("weighted-sum weights must be positive")
        object.__setattr__(self, "parts", parts)

    def __str__(self):
        return "sum:" + "+".join(f"{rational_str(w)}*{spec}" for w, spec in self.parts)


CATALOG_TYPES = (UnitCircleLebesgue, Circle, WeightedCircle, UnitDiskArea, WeightedSum)


# -- weight evaluation ------------------------------------------------------


def weight_values(wc, points):
    """w(theta) on a uniform grid of the given size (float)."""
    theta = 2.0 * math.pi * np.arange(points) / points
    values = np.full(points, float(wc.fourier[0].re))
    for k in range(1, len(wc.fourier)):
        ak = complex(wc.fourier[k])
        values += 2.0 * (ak * np.exp(1j * k * theta)).real
    return values


def weight_function(wc):
    """Scalar callable theta -> w(theta) for refinement passes."""
    coeffs = [complex(a) for a in wc.fourier]

    def w(theta):
        total = coeffs[0].real
        for k in range(1, len(coeffs)):
            total += 2.0 * (coeffs[k] * complex(math.cos(k * theta), math.sin(k * theta))).real
        return total

    return w


# -- moments ----------------------------------------------------------------


def _pow_exact(base, k):
    result = RationalComplex(1)
    acc = base
    while k:
        if k & 1:
            result = result * acc
        acc = acc * acc
        k >>= 1
    return result


def moment(spec, n, m):
    """Exact moment c[n, m] = integral of z^n conj(z)^m d(spec)."""
    if n < 0 or m < 0:
        raise InvalidInput("moment degrees must be non-negative")
    if isinstance(spec, UnitCircleLebesgue):
        return RationalComplex(1 if n == m else 0)
    if isinstance(spec, Circle):
        a = spec.center
        ac = a.conjugate()
        r2 = spec.radius * spec.radius
        total = EXACT_ZERO
        for k in range(min(n, m) + 1):
            term = RationalComplex(math.comb(n, k) * math.comb(m, k) * r2**k)
            if n > k:
                term = term * _pow_exact(a, n - k)
            if m > k:
                term = term * _pow_exact(ac, m - k)
            total = total + term
        return total
    if isinstance(spec, WeightedCircle):
        return spec.coefficient(m - n)
    if isinstance(spec, UnitDiskArea):
        return RationalComplex(rational(1, n + 1)) if n == m else EXACT_ZERO
    if isinstance(spec, WeightedSum):
        total = EXACT_ZERO
        for w, part in spec.parts:
            total = total + RationalComplex(w) * moment(part, n, m)
        return total
    raise UnsupportedMeasure(f"not a catalog measure: {spec!r}")


def moment_matrix(spec, n, mode=EXACT):
    """Truncated moment matrix with entries c[i, j] for i, j <= n."""
    if n < 0:
        raise InvalidInput("degree bound must be >= 0")
    exact = HermitianTruncation.from_entry_fn(
        n + 1, lambda i, j: moment(spec, i, j), mode=EXACT, check=False
    )
    return exact if mode == EXACT else exact.to_float()


def quadrature_moment_oracle(spec, n, m, points=WEIGHT_GRID_POINTS):
    """Independent quadrature estimate of moment(spec, n, m).

    Trapezoid rule in theta (exact for trigonometric polynomials below the
    grid's Nyquist degree) with Gauss-Legendre in radius for the disk, so
    the result matches the closed form to rounding for all catalog leaves.
    """
    if points < 64:
        raise InvalidInput("oracle needs at least 64 quadrature points")
    if isinstance(spec, WeightedSum):
        raise UnsupportedMeasure("oracle applies to catalog leaves; "
                                 "sum measures are handled by the caller")
    theta = 2.0 * math.pi * np.arange(points) / points
    if isinstance(spec, UnitDiskArea):
        nodes, weights = np.polynomial.legendre.leggauss(min(points, 256))
        radii = 0.5 * (nodes + 1.0)
        radial = float(np.sum(0.5 * weights * radii ** (n + m + 1)))
        angular = complex(np.mean(np.exp(1j * (n - m) * theta)))
        return 2.0 * radial * angular
    if isinstance(spec, (UnitCircleLebesgue, WeightedCircle)):
        z = np.exp(1j * theta)
        density = (
            weight_values(spec, points)
            if isinstance(spec, WeightedCircle)
            else np.ones(points)
        )
        return complex(np.mean(density * z**n * np.conj(z) ** m))
    if isinstance(spec, Circle):
        z = complex(spec.center) + float(spec.radius) * np.exp(1j * theta)
        return complex(np.mean(z**n * np.conj(z) ** m))
    raise UnsupportedMeasure(f"not a catalog measure: {spec!r}")


# -- support geometry --------------------------------------------------------


@dataclass(frozen=True)
class HullDescriptor:
    """Closed disk containing the polynomial convex hull of the support."""

    center: complex
    radius: float

    @property
    def sup_abs(self):
        return abs(self.center) + self.radius

    def contains(self, other, tol=1e-12):
        return abs(other.center - self.center) + other.radius <= self.radius + tol


def _merge_disks(d1, d2):
    if d1.contains(d2, tol=0.0):
        return d1
    if d2.contains(d1, tol=0.0):
        return d2
    gap = d2.center - d1.center
    dist = abs(gap)
    u = gap / dist
    p1 = d1.center - d1.radius * u
    p2 = d2.center + d2.radius * u
    return HullDescriptor(0.5 * (p1 + p2), 0.5 * (dist + d1.radius + d2.radius))


def hull(spec):
    """Disk hull of the support.

    Exact for catalog leaves.  For weighted sums the component hulls are
    merged pairwise, which is the smallest disk for two components and a
    containing disk in general.
    """
    if isinstance(spec, (UnitCircleLebesgue, WeightedCircle, UnitDiskArea)):
        return HullDescriptor(0j, 1.0)
    if isinstance(spec, Circle):
        return HullDescriptor(complex(spec.center), float(spec.radius))
    if isinstance(spec, WeightedSum):
        disks = [hull(part) for _, part in spec.parts]
        merged = disks[0]
        for d in disks[1:]:
            merged = _merge_disks(merged, d)
        return merged
    raise UnsupportedMeasure(f"not a catalog measure: {spec!r}")


def support_primitives(spec):
    """Geometric support pieces as ('circle'|'disk', center, radius) tuples."""
    if isinstance(spec, (UnitCircleLebesgue, WeightedCircle)):
        return (("circle", 0j, 1.0),)
    if isinstance(spec, Circle):
        return (("circle", complex(spec.center), float(spec.radius)),)
    if isinstance(spec, UnitDiskArea):
        return (("disk", 0j, 1.0),)
    if isinstance(spec, WeightedSum):
        out = ()
        for _, part in spec.parts:
            out += support_primitives(part)
        return out
    raise UnsupportedMeasure(f"not a catalog measure: {spec!r}")


# -- text syntax --------------------------------------------------------------


def _parse_rational_token(token, context):
    try:
        return rational(token)
    except (ParseError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {token!r} in {context!r}") from exc


def parse_measure(text):
    """Parse the measure spec syntax used by the CLI and matrix files."""
    body = text.strip()
    if body == "unit-circle":
        return UnitCircleLebesgue()
    if body == "disk-area":
        return UnitDiskArea()
    if body.startswith("circle:"):
        fields = body[len("circle:"):].split(",")
        if len(fields) != 3:
            raise ParseError(f"circle spec needs re,im,radius: {body!r}")
        re, im, r = (_parse_rational_token(f, body) for f in fields)
        return Circle(RationalComplex(re, im), r)
    if body.startswith("wcircle:"):
        groups = body[len("wcircle:"):].split(";")
        coeffs = [RationalComplex(_parse_rational_token(groups[0], body))]
        for group in groups[1:]:
            pair = group.split(",")
            if len(pair) != 2:
                raise ParseError(f"wcircle coefficient needs re,im: {group!r}")
            coeffs.append(
                RationalComplex(
                    _parse_rational_token(pair[0], body),
                    _parse_rational_token(pair[1], body),
                )
            )
        return WeightedCircle(tuple(coeffs))
    if body.startswith("sum:"):
        parts = []
        for term in body[len("sum:"):].split("+"):
            if "*" not in term:
                raise ParseError(f"sum term needs weight*spec: {term!r}")
            w_text, spec_text = term.split("*", 1)
            if spec_text.startswith("sum:"):
                raise ParseError("nested sum specs are not supported in text form")
            parts.append((_parse_rational_token(w_text, body), parse_measure(spec_text)))
        return WeightedSum(tuple(parts))
    raise ParseError(f"unknown measure spec: {text!r}")


def format_measure(spec):
    """Canonical text form (parse_measure round-trips it)."""
    if not isinstance(spec, CATALOG_TYPES):
        raise UnsupportedMeasure(f"not a catalog measure: {spec!r}")
    return str(spec)
