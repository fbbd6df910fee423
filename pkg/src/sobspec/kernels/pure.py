"""Pure-Python (numpy) implementations of the hot kernels.

Same algorithms as the compiled lane in ``sobspec._ckernels``: cyclic
Jacobi for Hermitian eigenvalues, explicit shifted QR for Hessenberg
eigenvalues, and a tolerance-checked Cholesky.  Row/column updates are
vectorized; the pivot loops stay in Python.
"""

import cmath
import math

import numpy as np

from sobspec.errors import NoConvergence, NotPositiveDefinite

BACKEND_NAME = "pure"

# Rotation skip threshold relative to sqrt(|a_pp a_qq|); keeping it tied to
# the local diagonal preserves the high relative accuracy of Jacobi on
# positive definite matrices.
_JACOBI_SKIP = 1e-16

_EPS = 2.220446049250313e-16


def jacobi_eigvals(a_in, max_sweeps=100):
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi."""
    a = np.array(a_in, dtype=np.complex128)
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])
    a = 0.5 * (a + a.conj().T)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mod = abs(apq)
                if mod == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                if mod <= _JACOBI_SKIP * math.sqrt(abs(app * aqq)):
                    continue
                rotated = True
                phase = apq / mod
                tau = (aqq - app) / (2.0 * mod)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - s * phase.conjugate() * colq
                a[:, q] = s * phase * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - s * phase * rowq
                a[q, :] = s * phase.conjugate() * rowp + c * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        if not rotated:
            return np.sort(np.diagonal(a).real.copy())
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def _givens(f, g):
    # c real, s complex with [[c, s], [-conj(s), c]] @ (f, g) = (r, 0).
    if g == 0.0:
        return 1.0, 0.0 + 0.0j
    if f == 0.0:
        return 0.0, g.conjugate() / abs(g)
    af = abs(f)
    h = math.hypot(af, abs(g))
    return af / h, (f / af) * g.conjugate() / h


def _block2_eigvals(a, b, c, d):
    half = 0.5 * (a + d)
    disc = cmath.sqrt(0.25 * (a - d) * (a - d) + b * c)
    return half + disc, half - disc


def hessenberg_eigvals(h_in, max_iter=40):
    """Eigenvalues of an upper Hessenberg matrix by shifted explicit QR."""
    h = np.array(h_in, dtype=np.complex128)
    n = h.shape[0]
    out = np.empty(n, dtype=np.complex128)
    count = 0
    hi = n - 1
    iters = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            small = _EPS * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo]))
            if small == 0.0:
                small = _EPS * float(np.sum(np.abs(np.diagonal(h[: hi + 1, : hi + 1]))))
            if abs(h[lo, lo - 1]) <= small:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            out[count] = h[hi, hi]
            count += 1
            hi -= 1
            iters = 0
            continue
        if lo == hi - 1:
            l1, l2 = _block2_eigvals(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi])
            out[count] = l1
            out[count + 1] = l2
            count += 2
            hi -= 2
            iters = 0
            continue
        iters += 1
        if iters > max_iter * (hi - lo + 1):
            raise NoConvergence("Hessenberg QR did not converge")
        if iters % 10 == 0:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            l1, l2 = _block2_eigvals(
                h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi]
            )
            d = h[hi, hi]
            mu = l1 if abs(l1 - d) <= abs(l2 - d) else l2
        idx = np.arange(lo, hi + 1)
        h[idx, idx] -= mu
        rots = []
        for i in range(lo, hi):
            c, s = _givens(h[i, i], h[i + 1, i])
            rots.append((c, s))
            t1 = h[i, i:hi + 1].copy()
            t2 = h[i + 1, i:hi + 1].copy()
            h[i, i:hi + 1] = c * t1 + s * t2
            h[i + 1, i:hi + 1] = -s.conjugate() * t1 + c * t2
            h[i + 1, i] = 0.0
        for k, (c, s) in enumerate(rots):
            i = lo + k
            jtop = min(i + 2, hi)
            t1 = h[lo:jtop + 1, i].copy()
            t2 = h[lo:jtop + 1, i + 1].copy()
            h[lo:jtop + 1, i] = c * t1 + s.conjugate() * t2
            h[lo:jtop + 1, i + 1] = -s * t1 + c * t2
        h[idx, idx] += mu
    return out


def cholesky_lower(a_in, rel_tol=1e-13):
    """Lower Cholesky factor with a scale-invariant pivot tolerance.

    Raises NotPositiveDefinite(index) when a pivot falls at or below
    rel_tol times the largest diagonal entry.
    """
    a = np.array(a_in, dtype=np.complex128)
    n = a.shape[0]
    low = np.zeros((n, n), dtype=np.complex128)
    max_diag = float(np.max(np.real(np.diagonal(a)))) if n else 0.0
    threshold = rel_tol * max_diag if max_diag > 0.0 else 0.0
    for j in range(n):
        pivot = a[j, j].real - float(np.sum(np.abs(low[j, :j]) ** 2))
        if pivot <= threshold:
            raise NotPositiveDefinite(j)
        ljj = math.sqrt(pivot)
        low[j, j] = ljj
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ low[j, :j].conj()) / ljj
    return low
