"""Command-line interface.

Subcommands: moments, sobolev, opoly, zeros, eigs, ratio, multnorm,
dominate, tailsum, hull, weight-extrema, thm1-bound, reproduce.

Exit codes: 0 success, 1 failed reproduction checks, 2 usage/parse
errors, 3 numeric failures (non-definite matrices, no convergence).
Matrix outputs are JSON matrix files; sequence outputs are CSV (or JSON
with --format json) with deterministic formatting.  Every run with an
--out target also writes a <out>.manifest.json run manifest.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from sobspec import diagnostics as diag
from sobspec import kernels
from sobspec.cache import TruncationCache
from sobspec.errors import (
    ForbiddenConversion,
    InvalidInput,
    NumericError,
    ParseError,
    SizeMismatch,
)
from sobspec.matrices import EXACT, FLOAT
from sobspec.matrixfile import (
    RunManifest,
    csv_table,
    dumps_matrix,
    file_sha256,
    json_table,
    read_matrix,
    text_sha256,
    write_manifest,
)
from sobspec.measures import WeightedCircle, hull, parse_measure
from sobspec.orthopoly import monic_orthogonal_family, zero_bound_check, zeros
from sobspec.reproduce import PIPELINES
from sobspec.scalars import format_float, rational_str
from sobspec.sobolev import (
    SobolevSource,
    SobolevSpec,
    parse_component_text,
    sobolev_matrix,
)
from sobspec.sources import FixedMatrixSource, IdentitySource, MeasureSource

USAGE_ERRORS = (ParseError, InvalidInput, SizeMismatch, ForbiddenConversion)


def _parse_range(text):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ParseError(f"bad range {text!r}; expected a..b") from None
    if lo < 0 or hi < lo:
        raise ParseError(f"bad range {text!r}; need 0 <= a <= b")
    return lo, hi


class _Run:
    """Holds per-invocation config plus manifest bookkeeping."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = argv
        self.mode = EXACT if args.mode == "exact" else FLOAT
        cache_dir = os.environ.get("SOBSPEC_CACHE") or args.cache_dir
        self.cache = TruncationCache(cache_dir) if cache_dir else None
        self.started = time.monotonic()
        self.input_hashes = {}
        self.outputs = []

    def resolve_source(self, text):
        """Source spec: 'identity', a matrix file path, or a measure spec."""
        if text == "identity":
            return IdentitySource(self.mode)
        if os.path.exists(text):
            matrix, provenance = read_matrix(text)
            self.input_hashes[text] = file_sha256(text)
            if self.mode == FLOAT:
                matrix = matrix.to_float()
            elif matrix.mode == FLOAT:
                raise ForbiddenConversion(
                    f"{text} holds float entries; exact mode cannot use it"
                )
            description = provenance.get("measure") or provenance.get(
                "assembly") or text
            return FixedMatrixSource(matrix, description)
        spec = parse_measure(text)
        self.input_hashes[text] = text_sha256(text)
        return MeasureSource(spec, self.mode, cache=self.cache)

    def resolve_components(self, component_texts):
        components = []
        used_orders = set()
        for position, text in enumerate(component_texts):
            head, order = parse_component_text(text)
            if order is None:
                order = position
            if order in used_orders:
                raise ParseError(f"duplicate derivative order {order} in components")
            used_orders.add(order)
            components.append((self.resolve_source(head), order))
        return SobolevSpec(components)

    def emit(self, text, out_override=None):
        target = out_override or self.args.out
        if target:
            Path(target).write_text(text)
            self.outputs.append(str(target))
        else:
            sys.stdout.write(text)

    def emit_table(self, header, rows, trailers=(), extra=None):
        if self.args.format == "json":
            self.emit(json_table(header, rows, extra))
        else:
            self.emit(csv_table(header, rows, trailers))

    def finish(self, status=0):
        if self.args.out:
            manifest = RunManifest(
                command=list(self.argv),
                config={
                    "mode": self.args.mode,
                    "format": self.args.format,
                    "cache_dir": str(self.cache.root) if self.cache else None,
                    "kernel_backend": kernels.backend_name(),
                },
                tolerances={"tol": self.args.tol},
                input_hashes=self.input_hashes,
                outputs=self.outputs,
                wall_time_s=time.monotonic() - self.started,
            )
            write_manifest(str(self.args.out) + ".manifest.json", manifest)
        return status


# -- subcommands --------------------------------------------------------------


def cmd_moments(run):
    args = run.args
    source = run.resolve_source(args.measure)
    if not isinstance(source, (MeasureSource, IdentitySource)):
        raise ParseError(f"{args.measure!r} is not a measure spec")
    matrix = source.truncation(args.n + 1)
    provenance = {"measure": source.description, "degree_bound": args.n}
    run.emit(dumps_matrix(matrix, provenance))
    return run.finish()


def cmd_sobolev(run):
    args = run.args
    spec = run.resolve_components(args.component)
    matrix = sobolev_matrix(spec, args.n, run.mode)
    provenance = {"assembly": spec.description, "degree_bound": args.n}
    run.emit(dumps_matrix(matrix, provenance))
    return run.finish()


def cmd_opoly(run):
    args = run.args
    source = run.resolve_source(args.matrix)
    lo, hi = _parse_range(args.degrees)
    family = monic_orthogonal_family(
        source.truncation(hi + 1), hi, source.description
    )
    header = ["degree", "h"] + [f"c{k}" for k in range(hi + 1)]
    rows = []
    for n in range(lo, hi + 1):
        poly = family.monic[n]
        cells = [n, family.norms_sq[n]]
        for k in range(hi + 1):
            if k < len(poly.coeffs):
                c = poly.coeffs[k]
                if family.mode == EXACT:
                    cells.append(str(c))
                else:
                    cells.append(format_float(c.real) + "+" + format_float(c.imag) + "j")
            else:
                cells.append(None)
        rows.append(cells)
    run.emit_table(header, rows)
    return run.finish()


def _bound_radii(run, source, degrees, bound_spec):
    lo, hi = degrees
    if bound_spec.startswith("value:"):
        radius = float(bound_spec[len("value:"):])
        return {n: radius for n in range(lo, hi + 1)}
    if bound_spec == "hull":
        text = source.description
        try:
            spec = parse_measure(text)
        except ParseError:
            raise ParseError(
                "--bound hull needs a measure source or a matrix file with "
                f"measure provenance; got {text!r}"
            ) from None
        sup = hull(spec).sup_abs
        return {n: sup for n in range(lo, hi + 1)}
    if bound_spec == "multnorm":
        seq = diag.multnorm_sequence(source, (max(lo - 1, 0), hi - 1))
        by_n = {row.n: row.d for row in seq.rows}
        return {n: by_n[n - 1] for n in range(lo, hi + 1)}
    raise ParseError(f"unknown bound spec {bound_spec!r}")


def cmd_zeros(run):
    args = run.args
    source = run.resolve_source(args.matrix)
    lo, hi = _parse_range(args.degrees)
    if lo < 1:
        raise ParseError("zeros need degrees >= 1")
    family = monic_orthogonal_family(
        source.truncation(hi + 1), hi, source.description
    )
    report = zeros(family, range(lo, hi + 1))
    radii = _bound_radii(run, source, (lo, hi), args.bound)
    zero_bound_check(report, radii)
    rows = []
    for n in range(lo, hi + 1):
        for z in report.roots[n]:
            ok = abs(z) < report.bounds[n] - 1e-9
            rows.append((n, z.real, z.imag, abs(z), report.bounds[n], ok))
    run.emit_table(("degree", "root_re", "root_im", "root_abs", "bound", "ok"), rows)
    return run.finish()


def cmd_eigs(run):
    args = run.args
    a = run.resolve_source(args.a)
    b = run.resolve_source(args.b)
    seq = diag.eigen_sequence(a, b, _parse_range(args.n_range))
    rows = [(r.n, r.lam, r.beta, r.flag) for r in seq.rows]
    trailers = [f"#trend:lambda={seq.trend_lambda}", f"#trend:beta={seq.trend_beta}"]
    extra = {
        "trend_lambda": seq.trend_lambda,
        "trend_beta": seq.trend_beta,
        "b_condition": [r.b_condition for r in seq.rows],
    }
    run.emit_table(("n", "lambda_n", "beta_n", "flag"), rows, trailers, extra)
    return run.finish()


def cmd_ratio(run):
    args = run.args
    source = run.resolve_source(args.matrix)
    seq = diag.ratio_sequence(source, _parse_range(args.n_range))
    rows = [(n, v) for n, v in seq.rows]
    run.emit_table(("n", "ratio"), rows, [f"#trend:{seq.trend}"],
                   {"trend": seq.trend})
    return run.finish()


def cmd_multnorm(run):
    args = run.args
    source = run.resolve_source(args.matrix)
    seq = diag.multnorm_sequence(source, _parse_range(args.n_range))
    rows = [(r.n, r.d, r.flag) for r in seq.rows]
    run.emit_table(("n", "d_n", "flag"), rows, [f"#trend:{seq.trend}"],
                   {"trend": seq.trend})
    return run.finish()


def cmd_dominate(run):
    args = run.args
    family = [run.resolve_source(t) for t in args.family]
    report = diag.domination_check(family, args.n_max)
    rows = [(p.index, r.n, r.beta, r.flag) for p in report.pairs for r in p.rows]
    trailers = [
        f"#pair {p.index}: C={format_float(p.observed_constant)} trend={p.trend}"
        for p in report.pairs
    ]
    trailers.append(f"#constant:{format_float(report.observed_constant)}")
    trailers.append(f"#trend:{report.trend}")
    extra = {
        "constant": report.observed_constant,
        "trend": report.trend,
    }
    run.emit_table(("pair", "n", "beta_n", "flag"), rows, trailers, extra)
    return run.finish()


def cmd_tailsum(run):
    args = run.args
    family = [run.resolve_source(t) for t in args.family]
    constant = args.constant
    if constant is None:
        constant = diag.domination_check(family, args.n_max).observed_constant
    report = diag.tail_sum_family(family, args.n_max, domination_constant=constant)
    rows = [
        (p.index, r.n, r.lam, r.beta, r.flag)
        for p in report.pairs
        for r in p.rows
    ]
    trailers = [
        f"#pair {p.index}: sup_beta={format_float(p.sup_beta)} "
        f"bound={format_float(p.bound)} within={str(p.within_bound).lower()}"
        for p in report.pairs
    ]
    trailers.append(f"#constant:{format_float(constant)}")
    run.emit_table(("pair", "n", "lambda_n", "beta_n", "flag"), rows, trailers,
                   {"constant": constant})
    return run.finish()


def cmd_hull(run):
    args = run.args
    inner = parse_measure(args.inner)
    outer = parse_measure(args.outer)
    contained = diag.hull_containment(inner, outer)
    relation = diag.support_relation(inner, outer)
    run.emit_table(
        ("inner", "outer", "hull_contained", "support_relation"),
        [(args.inner, args.outer, contained, relation)],
    )
    return run.finish()


def cmd_weight_extrema(run):
    args = run.args
    spec = parse_measure(args.weight)
    if not isinstance(spec, WeightedCircle):
        raise ParseError(f"{args.weight!r} is not a weighted-circle spec")
    lo, hi = diag.weight_extrema(spec)
    run.emit_table(("weight", "min", "max"), [(args.weight, lo, hi)])
    return run.finish()


def cmd_thm1_bound(run):
    args = run.args
    radius = diag.combined_norm_bound(args.c, args.dnorm)
    run.emit_table(("radius",), [(radius,)])
    return run.finish()


def cmd_reproduce(run):
    args = run.args
    outdir = args.out or f"sobspec-{args.example}-report"
    pipeline = PIPELINES[args.example]
    ok, summary = pipeline(outdir, cache=run.cache, command=run.argv)
    sys.stdout.write(summary)
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sobspec",
        description="Moment matrices, Sobolev inner products, orthogonal "
        "polynomials and multiplication-operator boundedness diagnostics.",
    )
    parser.add_argument("--mode", choices=["exact", "float"], default="exact")
    parser.add_argument("--cache-dir", default=None,
                        help="truncation cache directory (SOBSPEC_CACHE overrides)")
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="slack recorded in the run manifest and used by "
                        "bound checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="moment matrix of a catalog measure")
    p.add_argument("measure")
    p.add_argument("--n", type=int, required=True, help="degree bound")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("sobolev", help="assemble a matrix Sobolev inner product")
    p.add_argument("--component", action="append", required=True,
                   metavar="SPEC[:order=J]")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_sobolev)

    p = sub.add_parser("opoly", help="monic orthogonal family of a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--degrees", required=True, metavar="A..B")
    p.set_defaults(func=cmd_opoly)

    p = sub.add_parser("zeros", help="zeros of the monic family with bounds")
    p.add_argument("--matrix", required=True)
    p.add_argument("--degrees", required=True, metavar="A..B")
    p.add_argument("--bound", default="multnorm",
                   help="hull | multnorm | value:<x>")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("eigs", help="extreme generalized eigenvalues of (A, B)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--n-range", required=True, metavar="A..B")
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("ratio", help="diagonal ratio test")
    p.add_argument("--matrix", required=True)
    p.add_argument("--n-range", required=True, metavar="A..B")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("multnorm", help="restricted multiplication norms")
    p.add_argument("--matrix", required=True)
    p.add_argument("--n-range", required=True, metavar="A..B")
    p.set_defaults(func=cmd_multnorm)

    p = sub.add_parser("dominate", help="sequential-domination evidence")
    p.add_argument("--family", nargs="+", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_dominate)

    p = sub.add_parser("tailsum", help="tail-sum comparability evidence")
    p.add_argument("--family", nargs="+", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--constant", type=float, default=None)
    p.set_defaults(func=cmd_tailsum)

    p = sub.add_parser("hull", help="support-hull containment of two measures")
    p.add_argument("--inner", required=True)
    p.add_argument("--outer", required=True)
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("weight-extrema", help="extrema of a circle weight")
    p.add_argument("--weight", required=True)
    p.set_defaults(func=cmd_weight_extrema)

    p = sub.add_parser("thm1-bound", help="combined operator-norm radius")
    p.add_argument("--c", nargs="*", type=float, default=[],
                   help="domination constants for orders 1..k")
    p.add_argument("--dnorm", nargs="+", type=float, required=True,
                   help="multiplication norms for orders 0..k")
    p.set_defaults(func=cmd_thm1_bound)

    p = sub.add_parser("reproduce", help="run a worked-example pipeline")
    p.add_argument("example", choices=sorted(PIPELINES))
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    run = _Run(args, argv)
    try:
        return args.func(run)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
