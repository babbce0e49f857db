"""Backend selection for the hot kernels.

The compiled module is used when it imports; set ``KAEP_PURE_PYTHON=1`` to
force the numpy fallback (the test-suite runs both).
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("KAEP_PURE_PYTHON", "") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

nondominated_rank = _impl.nondominated_rank
nondominated_mask = _impl.nondominated_mask
crowding_distance = _impl.crowding_distance
hv2d = _impl.hv2d
hv3d = _impl.hv3d

__all__ = [
    "BACKEND",
    "nondominated_rank",
    "nondominated_mask",
    "crowding_distance",
    "hv2d",
    "hv3d",
]
