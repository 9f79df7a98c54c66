"""Numba switch.

Kernels are compiled with numba unless ``MWDS_DISABLE_NUMBA`` is set to a truthy
value (or numba is not importable), in which case the pure-numpy variants of
the hot kernels are used and the remaining helpers run as plain Python.
"""
import os
import time
import warnings

_FLAG = os.environ.get("MWDS_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_ENABLED = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(func):
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(func)
    return func


if NUMBA_ENABLED:
    # the clock is read in object mode from nogil kernels
    warnings.filterwarnings("ignore", message="Code running in object mode", category=numba.NumbaWarning)

    @numba.njit(cache=True, nogil=True)
    def now():
        with numba.objmode(t="float64"):
            t = time.perf_counter()
        return t

else:
    now = time.perf_counter


def pick(loop_impl, numpy_impl):
    """Return the compiled loop kernel, or the numpy variant when numba is off."""
    if NUMBA_ENABLED:
        return njit(loop_impl)
    return numpy_impl
