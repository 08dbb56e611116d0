"""JIT shim.

Hot kernels are written once as plain loops and compiled with numba when it is
available. Setting ``QSEARCH_DISABLE_JIT=1`` forces the pure-numpy kernels,
which is useful for debugging and for checking the two paths against each
other.
"""

import os

_DISABLED = os.environ.get("QSEARCH_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"


def compile_kernel(func):
    """Return a nopython-compiled copy of ``func``, or ``func`` itself without numba."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
