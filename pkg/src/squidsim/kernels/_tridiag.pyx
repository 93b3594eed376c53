# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled symmetric-tridiagonal eigen kernels.

Mirrors ``_tridiag_py`` function for function. The matrix is given by its
diagonal ``d`` (length n) and off-diagonal ``e`` (length n - 1).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef inline Py_ssize_t _count(const double[::1] d, const double[::1] e2,
                              double x, double pivmin) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def sturm_count(const double[::1] d, const double[::1] e, double x):
    """Number of eigenvalues strictly below ``x``."""
    cdef Py_ssize_t n = d.shape[0]
    cdef double[::1] e2 = np.empty(max(n - 1, 0))
    cdef Py_ssize_t i
    for i in range(n - 1):
        e2[i] = e[i] * e[i]
    return _count(d, e2, x, _pivmin(d, e))


cdef double _pivmin(const double[::1] d, const double[::1] e):
    cdef Py_ssize_t i
    cdef double m = 0.0
    for i in range(d.shape[0]):
        if fabs(d[i]) > m:
            m = fabs(d[i])
    for i in range(e.shape[0]):
        if fabs(e[i]) > m:
            m = fabs(e[i])
    return max(m, 1.0) * 2.2250738585072014e-308 / 2.220446049250313e-16


cdef double _maxabs(const double[::1] d, const double[::1] e, double shift):
    cdef Py_ssize_t i
    cdef double m = 1e-300
    for i in range(d.shape[0]):
        if fabs(d[i] - shift) > m:
            m = fabs(d[i] - shift)
    for i in range(e.shape[0]):
        if fabs(e[i]) > m:
            m = fabs(e[i])
    return m


def gershgorin_bounds(const double[::1] d, const double[::1] e):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i
    cdef double r, lo = d[0], hi = d[0]
    for i in range(n):
        r = 0.0
        if i > 0:
            r += fabs(e[i - 1])
        if i < n - 1:
            r += fabs(e[i])
        if d[i] - r < lo:
            lo = d[i] - r
        if d[i] + r > hi:
            hi = d[i] + r
    return lo, hi


def bisect_lowest(const double[::1] d, const double[::1] e, Py_ssize_t k,
                  double rtol=4.0e-16):
    """The ``k`` smallest eigenvalues, ascending, by Sturm bisection."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, j
    cdef double lo, hi, glo, ghi, mid, tol
    cdef double[::1] e2 = np.empty(max(n - 1, 0))
    cdef double pivmin = _pivmin(d, e)
    out = np.empty(k)
    cdef double[::1] w = out
    for i in range(n - 1):
        e2[i] = e[i] * e[i]
    glo, ghi = gershgorin_bounds(d, e)
    tol = rtol * max(fabs(glo), fabs(ghi))
    with nogil:
        for j in range(k):
            lo = glo if j == 0 else w[j - 1]
            hi = ghi
            while hi - lo > tol + rtol * fabs(lo + hi):
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                if _count(d, e2, mid, pivmin) > j:
                    hi = mid
                else:
                    lo = mid
            w[j] = 0.5 * (lo + hi)
    return out


def shifted_solve(const double[::1] d, const double[::1] e, double shift,
                  const double[::1] b):
    """Solve ``(T - shift I) x = b`` by Gaussian elimination with partial pivoting."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i
    cdef double[::1] a = np.empty(n)      # main diagonal of U
    cdef double[::1] c1 = np.empty(n)     # first superdiagonal of U
    cdef double[::1] c2 = np.zeros(n)     # second superdiagonal (fill-in)
    out = np.array(b, dtype=np.float64, copy=True)
    cdef double[::1] x = out
    cdef double sub, t, l
    cdef double tiny = 2.220446049250313e-16 * _maxabs(d, e, shift)
    with nogil:
        for i in range(n):
            a[i] = d[i] - shift
            c1[i] = e[i] if i < n - 1 else 0.0
        for i in range(n - 1):
            sub = e[i]
            if fabs(sub) > fabs(a[i]):
                # swap rows i and i + 1
                l = a[i] / sub
                a[i] = sub
                t = c1[i]
                c1[i] = a[i + 1]
                a[i + 1] = t - l * a[i + 1]
                c2[i] = c1[i + 1]
                c1[i + 1] = -l * c1[i + 1]
                t = x[i]
                x[i] = x[i + 1]
                x[i + 1] = t - l * x[i + 1]
            else:
                if a[i] == 0.0:
                    a[i] = tiny
                l = sub / a[i]
                a[i + 1] = a[i + 1] - l * c1[i]
                x[i + 1] = x[i + 1] - l * x[i]
        if a[n - 1] == 0.0:
            a[n - 1] = tiny
        x[n - 1] = x[n - 1] / a[n - 1]
        if n > 1:
            x[n - 2] = (x[n - 2] - c1[n - 2] * x[n - 1]) / a[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (x[i] - c1[i] * x[i + 1] - c2[i] * x[i + 2]) / a[i]
    return out


def inverse_iteration(const double[::1] d, const double[::1] e, double lam,
                      Py_ssize_t iterations=4):
    """Unit eigenvector for the eigenvalue ``lam`` (2-norm normalized)."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, it
    cdef double norm
    v = np.empty(n)
    cdef double[::1] vv = v
    # deterministic, non-symmetric start so no parity sector is missed
    for i in range(n):
        vv[i] = 1.0 + 0.5 * ((i * 7919) % 13) / 13.0
    for it in range(iterations):
        v = shifted_solve(d, e, lam, v)
        vv = v
        norm = 0.0
        for i in range(n):
            norm += vv[i] * vv[i]
        norm = sqrt(norm)
        for i in range(n):
            vv[i] /= norm
    return v
