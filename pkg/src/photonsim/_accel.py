"""Backend switch for the compiled kernels.

Set ``PHOTONSIM_NO_NUMBA=1`` to force the pure-numpy code paths, and
``PHOTONSIM_THREADS`` to cap the numba thread pool.
"""

import os

_FALSE = {"", "0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None
else:
    # the bundled TBB is too old for numba; OpenMP is always present here
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER = "omp"


def numba_enabled() -> bool:
    if numba is None:
        return False
    return os.environ.get("PHOTONSIM_NO_NUMBA", "").strip().lower() in _FALSE


def configure_threads() -> None:
    value = os.environ.get("PHOTONSIM_THREADS")
    if value and numba is not None:
        numba.set_num_threads(max(1, min(int(value), numba.config.NUMBA_NUM_THREADS)))


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"
