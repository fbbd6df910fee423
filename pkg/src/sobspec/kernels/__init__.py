"""Kernel backend selection: compiled extension with pure-numpy fallback.

The compiled lane (``sobspec._ckernels``, built from Cython) and the pure
lane (``sobspec.kernels.pure``) implement the same three functions:

    jacobi_eigvals(a, max_sweeps=100)      -> ascending real eigenvalues
    hessenberg_eigvals(h, max_iter=40)     -> complex eigenvalues
    cholesky_lower(a, rel_tol=1e-13)       -> lower Cholesky factor

The compiled lane is preferred when importable.  Set SOBSPEC_KERNELS=pure
(or =compiled) to force a lane; ``set_backend`` switches at runtime, which
the benchmark and the cross-lane tests rely on.
"""

import os

import numpy as np

from sobspec.kernels import pure as _pure

try:
    from sobspec import _ckernels as _compiled
except ImportError:
    _compiled = None

_BACKENDS = {"pure": _pure}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _BACKENDS.get(
    os.environ.get("SOBSPEC_KERNELS", "").strip().lower(),
    _compiled if _compiled is not None else _pure,
)


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return _active.BACKEND_NAME


def get_backend(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        ) from None


def set_backend(name):
    """Switch the active lane; returns the previous lane's name."""
    global _active
    previous = _active.BACKEND_NAME
    _active = get_backend(name)
    return previous


def jacobi_eigvals(a, max_sweeps=100):
    return _active.jacobi_eigvals(a, max_sweeps)


def hessenberg_eigvals(h, max_iter=40):
    return _active.hessenberg_eigvals(h, max_iter)


def cholesky_lower(a, rel_tol=1e-13):
    return _active.cholesky_lower(a, rel_tol)


def balance(a, radix=2.0):
    """Diagonal similarity scaling equalizing row/column norms.

    Powers of the radix only, so the transform is exact in binary floating
    point; shared by both lanes (it is O(n^2) and never hot).
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    done = False
    while not done:
        done = True
        for i in range(n):
            r = float(np.sum(np.abs(a[i, :]))) - abs(a[i, i])
            c = float(np.sum(np.abs(a[:, i]))) - abs(a[i, i])
            if r == 0.0 or c == 0.0:
                continue
            f = 1.0
            s = c + r
            while c < r / radix:
                c *= radix
                r /= radix
                f *= radix
            while c >= r * radix:
                c /= radix
                r *= radix
                f /= radix
            if (c + r) < 0.95 * s:
                done = False
                a[i, :] /= f
                a[:, i] *= f
    return a
