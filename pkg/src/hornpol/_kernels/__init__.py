"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time.  Set ``HORNPOL_DISABLE_NUMBA=1``
to force the numpy path (numba is also skipped when it cannot be imported).
Both implementations stay importable as :mod:`.numpy_impl` and
:mod:`.numba_impl` for cross-checking and benchmarking.
"""
import os

from . import numpy_impl

_FLAG = os.environ.get("HORNPOL_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG in {"1", "true", "yes", "on"}

if NUMBA_DISABLED:
    _impl = numpy_impl
else:
    try:
        from . import numba_impl as _impl
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _impl = numpy_impl

BACKEND = "numba" if _impl is not numpy_impl else "numpy"

etalon = _impl.etalon
cosine_sum = _impl.cosine_sum
histogram_counts = _impl.histogram_counts
trapezoid2d = _impl.trapezoid2d
count_coincidences = _impl.count_coincidences

__all__ = [
    "BACKEND",
    "NUMBA_DISABLED",
    "count_coincidences",
    "cosine_sum",
    "etalon",
    "histogram_counts",
    "trapezoid2d",
]
