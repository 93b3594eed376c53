"""Pure-Python symmetric-tridiagonal eigen kernels.

Same algorithms and signatures as the compiled ``_tridiag`` module: Sturm
sequence bisection for eigenvalues, inverse iteration with a partially
pivoted tridiagonal solve for eigenvectors. Used when the extension is not
built, and as the reference side of the kernel benchmark.
"""
import math

import numpy as np

_EPS = 2.220446049250313e-16
_SAFMIN = 2.2250738585072014e-308


def _pivmin(d, e):
    m = max([abs(v) for v in d] + [abs(v) for v in e] + [1.0])
    return m * _SAFMIN / _EPS


def _count(d, e2, x, pivmin):
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    count = 1 if q < 0.0 else 0
    for i in range(1, len(d)):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def sturm_count(d, e, x):
    """Number of eigenvalues strictly below ``x``."""
    d = [float(v) for v in d]
    e = [float(v) for v in e]
    return _count(d, [v * v for v in e], float(x), _pivmin(d, e))


def gershgorin_bounds(d, e):
    n = len(d)
    lo = hi = float(d[0])
    for i in range(n):
        r = (abs(e[i - 1]) if i > 0 else 0.0) + (abs(e[i]) if i < n - 1 else 0.0)
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    return float(lo), float(hi)


def bisect_lowest(d, e, k, rtol=4.0e-16):
    """The ``k`` smallest eigenvalues, ascending, by Sturm bisection."""
    d = [float(v) for v in d]
    e = [float(v) for v in e]
    e2 = [v * v for v in e]
    pivmin = _pivmin(d, e)
    glo, ghi = gershgorin_bounds(d, e)
    tol = rtol * max(abs(glo), abs(ghi))
    w = np.empty(k)
    for j in range(k):
        lo = glo if j == 0 else w[j - 1]
        hi = ghi
        while hi - lo > tol + rtol * abs(lo + hi):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if _count(d, e2, mid, pivmin) > j:
                hi = mid
            else:
                lo = mid
        w[j] = 0.5 * (lo + hi)
    return w


def shifted_solve(d, e, shift, b):
    """Solve ``(T - shift I) x = b`` by Gaussian elimination with partial pivoting."""
    n = len(d)
    a = [float(v) - shift for v in d]
    c1 = [float(v) for v in e] + [0.0]
    c2 = [0.0] * n
    x = [float(v) for v in b]
    tiny = _EPS * max([abs(v) for v in a] + [abs(v) for v in e] + [1e-300])
    for i in range(n - 1):
        sub = float(e[i])
        if abs(sub) > abs(a[i]):
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
            a[i + 1] -= l * c1[i]
            x[i + 1] -= l * x[i]
    if a[n - 1] == 0.0:
        a[n - 1] = tiny
    x[n - 1] /= a[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - c1[n - 2] * x[n - 1]) / a[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - c1[i] * x[i + 1] - c2[i] * x[i + 2]) / a[i]
    return np.array(x)


def inverse_iteration(d, e, lam, iterations=4):
    """Unit eigenvector for the eigenvalue ``lam`` (2-norm normalized)."""
    n = len(d)
    v = np.array([1.0 + 0.5 * ((i * 7919) % 13) / 13.0 for i in range(n)])
    for _ in range(iterations):
        v = shifted_solve(d, e, lam, v)
        v /= math.sqrt(float(np.dot(v, v)))
    return v
