"""Optional numba acceleration.

Set ``FRACBESSEL_NUMBA=0`` before import to force the pure-numpy paths.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("FRACBESSEL_NUMBA", "1") not in ("0", "false", "no")


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        fn = args[0]
        if USE_NUMBA:
            return numba.njit(cache=True)(fn)
        return fn

    def deco(fn):
        if USE_NUMBA:
            kwargs.setdefault("cache", True)
            return numba.njit(*args, **kwargs)(fn)
        return fn

    return deco
