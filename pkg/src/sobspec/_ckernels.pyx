# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: cyclic Jacobi, Hessenberg QR, Cholesky.

Mirrors sobspec.kernels.pure function-for-function; selected at import
by sobspec.kernels when available.
"""

import numpy as np

from sobspec.errors import NoConvergence, NotPositiveDefinite

from libc.math cimport fabs, hypot, sqrt

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cabs(double complex)

BACKEND_NAME = "compiled"

cdef double _JACOBI_SKIP = 1e-16
cdef double _EPS = 2.220446049250313e-16


def jacobi_eigvals(a_in, int max_sweeps=100):
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = a_arr.shape[0]
    if n == 1:
        return np.array([a_arr[0, 0].real])
    a_arr = 0.5 * (a_arr + a_arr.conj().T)
    cdef double complex[:, ::1] a = a_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef bint rotated
    cdef double complex apq, phase, colp, colq, rowp, rowq, pc
    cdef double mod, app, aqq, tau, t, c, s
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mod = cabs(apq)
                if mod == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                if mod <= _JACOBI_SKIP * sqrt(fabs(app * aqq)):
                    continue
                rotated = True
                phase = apq / mod
                pc = phase.conjugate()
                tau = (aqq - app) / (2.0 * mod)
                if tau >= 0.0:
                    t = 1.0 / (tau + hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + hypot(1.0, tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    colp = a[k, p]
                    colq = a[k, q]
                    a[k, p] = c * colp - s * pc * colq
                    a[k, q] = s * phase * colp + c * colq
                for k in range(n):
                    rowp = a[p, k]
                    rowq = a[q, k]
                    a[p, k] = c * rowp - s * phase * rowq
                    a[q, k] = s * pc * rowp + c * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        if not rotated:
            return np.sort(np.diagonal(a_arr).real.copy())
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


cdef inline void _givens(double complex f, double complex g,
                         double *c_out, double complex *s_out) nogil:
    cdef double af, h
    if g == 0.0:
        c_out[0] = 1.0
        s_out[0] = 0.0
        return
    if f == 0.0:
        c_out[0] = 0.0
        s_out[0] = g.conjugate() / cabs(g)
        return
    af = cabs(f)
    h = hypot(af, cabs(g))
    c_out[0] = af / h
    s_out[0] = (f / af) * g.conjugate() / h


def hessenberg_eigvals(h_in, int max_iter=40):
    """Eigenvalues of an upper Hessenberg matrix by shifted explicit QR."""
    h_arr = np.array(h_in, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = h_arr.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[:, ::1] h = h_arr
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t count = 0, hi = n - 1, lo, i, j, k, jtop
    cdef int iters = 0
    cdef double small, diagsum, c
    cdef double complex mu, half, disc, l1, l2, d, t1, t2, s
    cdef double[::1] cs
    cdef double complex[::1] ss
    cs_arr = np.empty(n, dtype=np.float64)
    ss_arr = np.empty(n, dtype=np.complex128)
    cs = cs_arr
    ss = ss_arr
    while hi >= 0:
        lo = hi
        while lo > 0:
            small = _EPS * (cabs(h[lo - 1, lo - 1]) + cabs(h[lo, lo]))
            if small == 0.0:
                diagsum = 0.0
                for i in range(hi + 1):
                    diagsum += cabs(h[i, i])
                small = _EPS * diagsum
            if cabs(h[lo, lo - 1]) <= small:
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
            half = 0.5 * (h[lo, lo] + h[hi, hi])
            disc = csqrt(0.25 * (h[lo, lo] - h[hi, hi]) * (h[lo, lo] - h[hi, hi])
                         + h[lo, hi] * h[hi, lo])
            out[count] = half + disc
            out[count + 1] = half - disc
            count += 2
            hi -= 2
            iters = 0
            continue
        iters += 1
        if iters > max_iter * (hi - lo + 1):
            raise NoConvergence("Hessenberg QR did not converge")
        if iters % 10 == 0:
            mu = h[hi, hi] + 0.75 * cabs(h[hi, hi - 1])
        else:
            half = 0.5 * (h[hi - 1, hi - 1] + h[hi, hi])
            disc = csqrt(0.25 * (h[hi - 1, hi - 1] - h[hi, hi])
                         * (h[hi - 1, hi - 1] - h[hi, hi])
                         + h[hi - 1, hi] * h[hi, hi - 1])
            d = h[hi, hi]
            if cabs(half + disc - d) <= cabs(half - disc - d):
                mu = half + disc
            else:
                mu = half - disc
        for i in range(lo, hi + 1):
            h[i, i] = h[i, i] - mu
        for i in range(lo, hi):
            _givens(h[i, i], h[i + 1, i], &c, &s)
            cs[i] = c
            ss[i] = s
            for j in range(i, hi + 1):
                t1 = h[i, j]
                t2 = h[i + 1, j]
                h[i, j] = c * t1 + s * t2
                h[i + 1, j] = -s.conjugate() * t1 + c * t2
            h[i + 1, i] = 0.0
        for i in range(lo, hi):
            c = cs[i]
            s = ss[i]
            jtop = i + 2
            if jtop > hi:
                jtop = hi
            for j in range(lo, jtop + 1):
                t1 = h[j, i]
                t2 = h[j, i + 1]
                h[j, i] = c * t1 + s.conjugate() * t2
                h[j, i + 1] = -s * t1 + c * t2
        for i in range(lo, hi + 1):
            h[i, i] = h[i, i] + mu
    return out_arr


def cholesky_lower(a_in, double rel_tol=1e-13):
    """Lower Cholesky factor with a scale-invariant pivot tolerance."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = a_arr.shape[0]
    low_arr = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] a = a_arr
    cdef double complex[:, ::1] low = low_arr
    cdef Py_ssize_t i, j, k
    cdef double max_diag = 0.0, threshold, pivot, ljj
    cdef double complex acc
    for i in range(n):
        if a[i, i].real > max_diag:
            max_diag = a[i, i].real
    threshold = rel_tol * max_diag if max_diag > 0.0 else 0.0
    for j in range(n):
        pivot = a[j, j].real
        for k in range(j):
            pivot -= low[j, k].real * low[j, k].real + low[j, k].imag * low[j, k].imag
        if pivot <= threshold:
            raise NotPositiveDefinite(j)
        ljj = sqrt(pivot)
        low[j, j] = ljj
        for i in range(j + 1, n):
            acc = a[i, j]
            for k in range(j):
                acc = acc - low[i, k] * low[j, k].conjugate()
            low[i, j] = acc / ljj
    return low_arr
