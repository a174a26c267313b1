"""Numba acceleration switch.

Hot kernels in :mod:`oscwigner._kernels` are written in plain loop style so
they run identically under numba's ``@njit`` and as ordinary NumPy/Python
code.  The compiled path is the default; set the environment variable
``OSCWIGNER_DISABLE_NUMBA=1`` before import to force the pure-NumPy fallback
(useful for debugging and for the benchmark in ``benchmarks/``).
"""

import os

ENV_FLAG = "OSCWIGNER_DISABLE_NUMBA"


def _numba_requested() -> bool:
    value = os.environ.get(ENV_FLAG, "").strip().lower()
    return value not in {"1", "true", "yes", "on"}


NUMBA_ENABLED = False
if _numba_requested():
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but be safe
        NUMBA_ENABLED = False

if NUMBA_ENABLED:

    def jit(func):
        return _njit(cache=True)(func)

else:

    def jit(func):
        return func
