"""Disk cache for expensive truncations.

Entries are matrix files keyed by (source description, size, scalar
mode).  Writes go through a temp file and os.replace, so concurrent runs
sharing a cache directory are safe.  On every cache hit five random
entries are re-derived from the source and compared; a mismatch (stale or
corrupt file) silently falls back to a fresh build that overwrites the
entry.
"""

import hashlib
import os
import random
import tempfile
from pathlib import Path

from sobspec.errors import SobspecError
from sobspec.matrices import EXACT
from sobspec.matrixfile import dumps_matrix, read_matrix

SPOT_CHECK_ENTRIES = 5


class TruncationCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(description, size, mode):
        text = f"{description}|size={size}|mode={mode}"
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:32]

    def path_for(self, description, size, mode):
        return self.root / f"{self.key(description, size, mode)}.json"

    def _spot_check(self, matrix, entry_fn):
        if entry_fn is None:
            return True
        rng = random.Random()
        n = matrix.size
        for _ in range(SPOT_CHECK_ENTRIES):
            i = rng.randrange(n)
            j = rng.randrange(n)
            fresh = entry_fn(i, j)
            if matrix.mode == EXACT:
                if matrix.entry(i, j) != fresh:
                    return False
            elif matrix.entry(i, j) != complex(fresh):
                return False
        return True

    def load_or_build(self, description, size, mode, build, entry_fn=None):
        path = self.path_for(description, size, mode)
        if path.exists():
            try:
                matrix, _ = read_matrix(path)
                if (
                    matrix.size == size
                    and matrix.mode == mode
                    and self._spot_check(matrix, entry_fn)
                ):
                    return matrix
            except (SobspecError, OSError):
                pass  # fall through to a fresh build
        matrix = build()
        self._store(path, matrix, description)
        return matrix

    def _store(self, path, matrix, description):
        payload = dumps_matrix(matrix, provenance={"source": description})
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
