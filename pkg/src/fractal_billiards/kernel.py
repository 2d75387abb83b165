"""Select the ray prefilter implementation at import time.

The compiled extension is used when it was built; otherwise the numpy
version takes over.  Setting ``FRACTAL_BILLIARDS_PURE=1`` forces the
fallback, which the benchmark and the equivalence tests rely on.
"""
from __future__ import annotations

import os

from . import _pykernel

BACKEND = "python"
ray_candidates = _pykernel.ray_candidates

if os.environ.get("FRACTAL_BILLIARDS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernel
    except ImportError:  # extension not built
        _ckernel = None
    if _ckernel is not None:
        ray_candidates = _ckernel.ray_candidates
        BACKEND = "cython"

__all__ = ["ray_candidates", "BACKEND"]
