"""Numba switch.

Set ``STARKFAM_PURE_NUMPY=1`` to run every kernel through its numpy fallback
instead of the compiled path. The flag is read once, at import time.
"""

import os

_FLAG = os.environ.get("STARKFAM_PURE_NUMPY", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(func):
    """``numba.njit(cache=True)`` when numba is usable, else ``func`` unchanged."""
    if numba is None:
        return func
    return numba.njit(cache=True)(func)
