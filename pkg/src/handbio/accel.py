"""Numba/NumPy backend selection for the hot kernels.

The compiled kernels are used whenever numba imports successfully.  Setting
``HANDBIO_NUMBA=0`` (also ``false``/``off``/``no``) forces the pure-NumPy
fallback implementations, which compute the same results more slowly.
"""

import os

_flag = os.environ.get("HANDBIO_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _flag not in {"0", "false", "off", "no"}

try:
    if not NUMBA_REQUESTED:
        raise ImportError("numba disabled via HANDBIO_NUMBA")
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def njit(func=None, **kwargs):
    """``numba.njit`` with caching, or a no-op decorator on the fallback path."""
    if _njit is None:
        if func is not None:
            return func
        return lambda f: f
    kwargs.setdefault("cache", True)
    if func is not None:
        return _njit(**kwargs)(func)
    return _njit(**kwargs)


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
