"""Backend selection for the hot kernels.

The environment variable RINGSIFT_NO_NUMBA=1 forces the pure-Python/numpy
fallback path; otherwise numba is used when importable.  The selection is
made once at import time, so a single process runs exactly one backend
(benchmarks compare backends across subprocesses).
"""

import os


def _numba_enabled():
    flag = os.environ.get("RINGSIFT_NO_NUMBA", "").strip().lower()
    if flag in {"1", "true", "yes", "on"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


JIT_ENABLED = _numba_enabled()

if JIT_ENABLED:
    from numba import njit

    def jit(fn):
        return njit(cache=True, nogil=True)(fn)

else:

    def jit(fn):
        return fn
