"""Symmetric-tridiagonal eigen kernels with a compiled core.

The Cython extension ``_tridiag`` is imported when available; otherwise the
pure-Python ``_tridiag_py`` is used. Set ``SQUIDSIM_BACKEND=python`` to force
the fallback.
"""
import os

import numpy as np

from . import _tridiag_py

BACKEND = "python"
_impl = _tridiag_py

if os.environ.get("SQUIDSIM_BACKEND", "").lower() != "python":
    try:
        from . import _tridiag as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"


def get_backend(name=None):
    """Return the kernel module for ``name`` ('compiled', 'python' or None for the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _tridiag_py
    if name == "compiled":
        from . import _tridiag

        return _tridiag
    raise ValueError(f"unknown kernel backend {name!r}")


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def sturm_count(d, e, x):
    return _impl.sturm_count(_c(d), _c(e), float(x))


def bisect_lowest(d, e, k, rtol=4.0e-16):
    return _impl.bisect_lowest(_c(d), _c(e), int(k), rtol)


def shifted_solve(d, e, shift, b):
    return _impl.shifted_solve(_c(d), _c(e), float(shift), _c(b))


def inverse_iteration(d, e, lam, iterations=4):
    return _impl.inverse_iteration(_c(d), _c(e), float(lam), int(iterations))


__all__ = [
    "BACKEND",
    "get_backend",
    "sturm_count",
    "bisect_lowest",
    "shifted_solve",
    "inverse_iteration",
]
