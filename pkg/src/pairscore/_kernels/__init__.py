"""Hot loops: compiled when the extension is built, numpy otherwise.

Set ``PAIRSCORE_PURE=1`` to force the fallback.
"""

import os

from . import _py

try:
    if os.environ.get("PAIRSCORE_PURE", "") not in ("", "0"):
        raise ImportError("pure mode requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _py
    BACKEND = "python"

equipartition = _impl.equipartition
clumps = _impl.clumps
optimize_x_axis = _impl.optimize_x_axis
prim_mst = _impl.prim_mst

__all__ = ["BACKEND", "equipartition", "clumps", "optimize_x_axis", "prim_mst"]
