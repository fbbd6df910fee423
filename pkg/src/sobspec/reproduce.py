"""End-to-end reproduction pipelines for the two worked examples.

Each pipeline runs the full stack (moments, assembly, pencils, zeros),
writes matrices, sequences and a human-readable summary into a report
directory, and checks every computed quantity against its reference
value.  A failed check makes the run report failure (nonzero CLI exit).

example1: Lebesgue measure on the unit circle paired with Lebesgue
measure on the circle of radius 1/2.  Matrix-level domination holds with
constant 1 while the supports are disjoint, so measure-level domination
is impossible; hull containment still holds.

example2: arc-length measure on |z-1| = 1 as the order-0 component with
the unit-circle measure under one derivative.  The assembled matrix is
the binomial grid plus diag(n^2); its diagonal ratios stay bounded (so
the unbounded-ratio test stays silent) and the base measure's smallest
eigenvalues collapse to zero, which is exactly the regime where the
two-term eigenvalue criteria give no information.

Known-values note for example2: the reference limit for the diagonal
ratios is sometimes quoted as 1, which corresponds to the diagonal
formula 2^n/n! + n^2.  The assembled diagonal is binom(2n, n) + n^2,
whose exact ratios tend to 4.  The report shows both sequences; the
qualitative conclusion (ratios stay bounded) is the same either way.
"""

import math
import time
from pathlib import Path

from sobspec.diagnostics import (
    AS_BASE_TERM,
    TREND_BOUNDED,
    two_term_identity_check,
    domination_check,
    eigen_sequence,
    hull_containment,
    ratio_sequence,
    support_relation,
    tail_sum_family,
)
from sobspec.matrixfile import (
    RunManifest,
    csv_table,
    text_sha256,
    write_manifest,
    write_matrix,
)
from sobspec.measures import Circle, UnitCircleLebesgue, format_measure
from sobspec.orthopoly import monic_orthogonal_family, zeros
from sobspec.scalars import RationalComplex, rational, rational_str
from sobspec.sobolev import SobolevSource, SobolevSpec, sobolev_matrix
from sobspec.sources import MeasureSource

EXAMPLE2_MATRIX = (
    (1, 1, 1, 1, 1),
    (1, 3, 3, 4, 5),
    (1, 3, 10, 10, 15),
    (1, 4, 10, 29, 35),
    (1, 5, 15, 35, 86),
)
EXAMPLE2_RATIOS = ("3", "10/3", "29/10", "86/29")
EXAMPLE2_R200_WINDOW = (3.95, 4.01)


class _Checklist:
    def __init__(self):
        self.entries = []

    def check(self, name, ok, detail=""):
        self.entries.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.entries)

    def summary(self, title, notes=()):
        lines = [f"# {title}", ""]
        for name, ok, detail in self.entries:
            status = "PASS" if ok else "FAIL"
            suffix = f" ({detail})" if detail else ""
            lines.append(f"- {status} {name}{suffix}")
        for note in notes:
            lines.extend(["", note])
        lines.append("")
        lines.append("overall: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"


def _eigen_csv(seq):
    rows = [(r.n, r.lam, r.beta, r.flag) for r in seq.rows]
    trailers = [f"#trend:lambda={seq.trend_lambda}", f"#trend:beta={seq.trend_beta}"]
    return csv_table(("n", "lambda_n", "beta_n", "flag"), rows, trailers)


def run_example1(outdir, cache=None, command=("reproduce", "example1")):
    start = time.monotonic()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    checks = _Checklist()
    outputs = []

    base = UnitCircleLebesgue()
    inner = Circle(RationalComplex(0), rational(1, 2))
    m0 = MeasureSource(base, cache=cache)
    m1 = MeasureSource(inner, cache=cache)
    n_max = 20

    for name, src in (("m0.matrix.json", m0), ("m1.matrix.json", m1)):
        path = outdir / name
        write_matrix(path, src.truncation(n_max + 1),
                     provenance={"measure": src.description, "degree_bound": n_max})
        outputs.append(str(path))

    seq = eigen_sequence(m1, m0, (0, n_max))
    checks.check(
        "largest generalized eigenvalues are exactly 1",
        all(r.beta == 1.0 for r in seq.rows),
        f"max |beta-1| = {max(abs(r.beta - 1.0) for r in seq.rows):.1e}",
    )
    checks.check(
        "smallest generalized eigenvalues are exactly 4^-n",
        all(r.lam == 4.0 ** -r.n for r in seq.rows),
    )
    (outdir / "eigs.csv").write_text(_eigen_csv(seq))
    outputs.append(str(outdir / "eigs.csv"))

    dom = domination_check([m0, m1], n_max)
    checks.check(
        "domination constant is 1",
        dom.observed_constant == 1.0,
        f"C = {dom.observed_constant}",
    )
    checks.check("domination trend is bounded-looking", dom.trend == TREND_BOUNDED)
    dom_rows = [
        (p.index, r.n, r.beta, r.flag) for p in dom.pairs for r in p.rows
    ]
    (outdir / "dominate.csv").write_text(
        csv_table(
            ("pair", "n", "beta_n", "flag"),
            dom_rows,
            [f"#constant:{dom.observed_constant!r}", f"#trend:{dom.trend}"],
        )
    )
    outputs.append(str(outdir / "dominate.csv"))

    checks.check("hull containment", hull_containment(inner, base))
    relation = support_relation(inner, base)
    checks.check(
        "supports are disjoint (matrix-level domination without "
        "measure-level domination)",
        relation == "disjoint",
        f"relation = {relation}",
    )

    tails = tail_sum_family([m0, m1], n_max, domination_constant=1.0)
    checks.check(
        "tail-sum upper comparability (beta <= 2)",
        all(p.within_bound for p in tails.pairs),
        f"sup beta = {max(p.sup_beta for p in tails.pairs)}",
    )
    checks.check(
        "tail-sum lower comparability (lambda >= 1)",
        all(p.inf_lambda >= 1.0 - 1e-9 for p in tails.pairs),
    )
    tail_rows = [
        (p.index, r.n, r.lam, r.beta, r.flag) for p in tails.pairs for r in p.rows
    ]
    (outdir / "tailsum.csv").write_text(
        csv_table(("pair", "n", "lambda_n", "beta_n", "flag"), tail_rows)
    )
    outputs.append(str(outdir / "tailsum.csv"))

    summary = checks.summary("worked example 1 report")
    (outdir / "summary.md").write_text(summary)
    outputs.append(str(outdir / "summary.md"))

    manifest = RunManifest(
        command=list(command),
        config={"mode": "exact", "n_max": n_max},
        input_hashes={
            format_measure(base): text_sha256(format_measure(base)),
            format_measure(inner): text_sha256(format_measure(inner)),
        },
        outputs=outputs,
        wall_time_s=time.monotonic() - start,
    )
    write_manifest(outdir / "manifest.json", manifest)
    return checks.ok, summary


def _quoted_diag_ratio(n):
    # 2^n/n! + n^2, the diagonal formula behind the quoted ratio limit of 1.
    term = rational(2**n, math.factorial(n))
    return (rational(2 ** (n + 1), math.factorial(n + 1)) + (n + 1) ** 2) / (
        term + n * n
    )


def run_example2(outdir, cache=None, command=("reproduce", "example2")):
    start = time.monotonic()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    checks = _Checklist()
    outputs = []

    base_measure = Circle(RationalComplex(1), 1)
    spec = SobolevSpec(
        [
            (MeasureSource(base_measure, cache=cache), 0),
            (MeasureSource(UnitCircleLebesgue(), cache=cache), 1),
        ]
    )
    source = SobolevSource(spec)

    assembled = sobolev_matrix(spec, 4)
    path = outdir / "sobolev.matrix.json"
    write_matrix(path, assembled,
                 provenance={"assembly": spec.description, "degree_bound": 4})
    outputs.append(str(path))
    grid_ok = all(
        assembled.entry(i, j) == EXAMPLE2_MATRIX[i][j]
        for i in range(5)
        for j in range(5)
    )
    checks.check("assembled 5x5 matrix matches the reference grid", grid_ok)

    ratios = ratio_sequence(source, (0, 3))
    got = [rational_str(v) for _, v in ratios.rows]
    checks.check(
        "exact diagonal ratios r0..r3",
        got == list(EXAMPLE2_RATIOS),
        " ".join(got),
    )
    r200 = float(ratio_sequence(source, (200, 200)).rows[0][1])
    lo, hi = EXAMPLE2_R200_WINDOW
    checks.check(
        "r_200 inside the limit-4 window [3.95, 4.01]",
        lo <= r200 <= hi,
        f"r_200 = {r200:.6f}",
    )
    quoted_r200 = float(_quoted_diag_ratio(200))
    checks.check(
        "quoted-limit formula disagrees with the assembled diagonal "
        "(ratio erratum)",
        abs(quoted_r200 - r200) > 1.0,
        f"quoted-formula r_200 = {quoted_r200:.6f}",
    )
    ratio_rows = [(n, v) for n, v in ratios.rows]
    ratio_rows.append((200, ratio_sequence(source, (200, 200)).rows[0][1]))
    (outdir / "ratio.csv").write_text(
        csv_table(("n", "ratio"), ratio_rows, [f"#trend:{ratios.trend}"])
    )
    outputs.append(str(outdir / "ratio.csv"))

    family = monic_orthogonal_family(source.truncation(9), 8, spec.description)
    report = zeros(family, range(1, 9))
    checks.check(
        "degree-1 orthogonal polynomial has its root at 1",
        abs(report.roots[1][0] - 1.0) < 1e-12,
        f"root = {report.roots[1][0]:.3e}",
    )
    zero_rows = [
        (n, z.real, z.imag, abs(z))
        for n in report.degrees
        for z in report.roots[n]
    ]
    (outdir / "zeros.csv").write_text(
        csv_table(("degree", "root_re", "root_im", "root_abs"), zero_rows)
    )
    outputs.append(str(outdir / "zeros.csv"))

    base_check = two_term_identity_check(
        MeasureSource(base_measure, cache=cache), AS_BASE_TERM, 8
    )
    checks.check(
        "base-measure smallest eigenvalues collapse (lambda_8 < 1e-4)",
        base_check.rows[-1].lam < 1e-4,
        f"lambda_8 = {base_check.rows[-1].lam:.3e}",
    )
    checks.check(
        "two-term eigenvalue criterion reports no information",
        base_check.verdict == "inconclusive",
    )
    lam_rows = [(r.n, r.lam, r.flag) for r in base_check.rows]
    (outdir / "lambda.csv").write_text(
        csv_table(("n", "lambda_n", "flag"), lam_rows, [f"#trend:{base_check.trend}"])
    )
    outputs.append(str(outdir / "lambda.csv"))

    erratum_note = (
        "ratio erratum: the quoted limit 1 for the diagonal ratios matches "
        "the formula 2^n/n! + n^2, not the assembled diagonal "
        "binom(2n, n) + n^2; the exact assembled ratios tend to 4 "
        f"(r_200 = {r200:.4f} vs quoted-formula {quoted_r200:.4f}).  Either "
        "way the ratios stay bounded, so the unbounded-ratio test draws no "
        "conclusion here."
    )
    summary = checks.summary("worked example 2 report", notes=[erratum_note])
    (outdir / "summary.md").write_text(summary)
    outputs.append(str(outdir / "summary.md"))

    manifest = RunManifest(
        command=list(command),
        config={"mode": "exact", "degree_bound": 4},
        input_hashes={spec.description: text_sha256(spec.description)},
        outputs=outputs,
        wall_time_s=time.monotonic() - start,
    )
    write_manifest(outdir / "manifest.json", manifest)
    return checks.ok, summary


PIPELINES = {"example1": run_example1, "example2": run_example2}
