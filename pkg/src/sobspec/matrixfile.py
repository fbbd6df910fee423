"""On-disk formats: matrix files, CSV/JSON reports, run manifests.

Matrix files are JSON with a fixed schema.  Rational entries are stored
as canonical 'p/q' strings so exact mode round-trips byte-identically;
float entries are stored as JSON numbers (shortest round-trip repr).
The Hermitian check is re-run on load.
"""

import hashlib
import json
from dataclasses import dataclass, field

from sobspec.errors import ParseError
from sobspec.matrices import EXACT, FLOAT, HermitianTruncation
from sobspec.scalars import (
    format_float,
    is_rational,
    parse_exact,
    rational_str,
    to_complex,
)

SCHEMA_VERSION = 1
_MODE_NAMES = {EXACT: "rational", FLOAT: "float"}
_MODES_BY_NAME = {v: k for k, v in _MODE_NAMES.items()}


def matrix_to_obj(matrix, provenance=None):
    entries = []
    if matrix.mode == EXACT:
        for row in matrix.rows():
            entries.append([[rational_str(v.re), rational_str(v.im)] for v in row])
    else:
        arr = matrix.as_array()
        for i in range(matrix.size):
            entries.append([[float(arr[i, j].real), float(arr[i, j].imag)]
                            for j in range(matrix.size)])
    obj = {
        "schema": SCHEMA_VERSION,
        "kind": "hermitian-truncation",
        "size": matrix.size,
        "mode": _MODE_NAMES[matrix.mode],
        "entries": entries,
    }
    if provenance:
        obj["provenance"] = provenance
    return obj


def matrix_from_obj(obj):
    if not isinstance(obj, dict) or obj.get("kind") != "hermitian-truncation":
        raise ParseError("not a matrix file (missing kind=hermitian-truncation)")
    if obj.get("schema") != SCHEMA_VERSION:
        raise ParseError(f"unsupported matrix file schema: {obj.get('schema')!r}")
    mode = _MODES_BY_NAME.get(obj.get("mode"))
    if mode is None:
        raise ParseError(f"unknown scalar mode {obj.get('mode')!r}")
    entries = obj.get("entries")
    size = obj.get("size")
    if not isinstance(entries, list) or len(entries) != size:
        raise ParseError("entry grid does not match declared size")
    if mode == EXACT:
        rows = [[parse_exact(re, im) for re, im in row] for row in entries]
        matrix = HermitianTruncation.exact(rows, check=True)
    else:
        rows = [[complex(re, im) for re, im in row] for row in entries]
        matrix = HermitianTruncation.floating(rows, check=True)
    return matrix, obj.get("provenance") or {}


def dumps_matrix(matrix, provenance=None):
    """Deterministic serialization (sorted keys, no whitespace)."""
    obj = matrix_to_obj(matrix, provenance)
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_matrix(path, matrix, provenance=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(matrix, provenance))


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix file {path}: {exc}") from exc
    return matrix_from_obj(obj)


# -- tabular reports -------------------------------------------------------------


def format_cell(value):
    """Deterministic text for one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if is_rational(value):
        return rational_str(value)
    return str(value)


def _quote_cell(text):
    if any(ch in text for ch in ",\"\r\n"):
        return '"' + text.replace('"', '""') + '"'
    return text


def csv_table(header, rows, trailers=()):
    """CSV text with fixed column order and optional '#'-prefixed trailers."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_quote_cell(format_cell(v)) for v in row))
    lines.extend(trailers)
    return "\n".join(lines) + "\n"


def json_table(header, rows, extra=None):
    """JSON counterpart of csv_table (same cells, richer types allowed)."""
    def cell(v):
        if v is None or isinstance(v, (bool, int, float, str)):
            return v
        if is_rational(v):
            return rational_str(v)
        return str(v)

    obj = {"rows": [dict(zip(header, (cell(v) for v in row))) for row in rows]}
    if extra:
        obj.update(extra)
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# -- manifests ----------------------------------------------------------------------


def text_sha256(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def file_sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    command: list
    config: dict
    tolerances: dict = field(default_factory=dict)
    input_hashes: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    wall_time_s: float = 0.0

    def to_json(self):
        obj = {
            "command": self.command,
            "config": self.config,
            "tolerances": self.tolerances,
            "input_hashes": self.input_hashes,
            "outputs": self.outputs,
            "wall_time_s": self.wall_time_s,
        }
        return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def write_manifest(path, manifest):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(manifest.to_json())
