"""Backend selection for the mode-action kernels.

The compiled extension is used when it was built; set PADICVOA_PURE_PYTHON=1
to force the pure-Python implementation.
"""
import os

if os.environ.get("PADICVOA_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = "cython" if _impl.__name__.endswith("_ckernels") else "python"

binom = _impl.binom
partitions = _impl.partitions
h_act = _impl.h_act
mode_act = _impl.mode_act
slice_trace = _impl.slice_trace
clear_cache = _impl.clear_cache
cache_size = _impl.cache_size

__all__ = [
    "BACKEND",
    "binom",
    "partitions",
    "h_act",
    "mode_act",
    "slice_trace",
    "clear_cache",
    "cache_size",
]
