"""Pure-Python (numpy) version of the ray prefilter in ``_ckernel``."""
from __future__ import annotations

import numpy as np


def ray_candidates(px: float, py: float, dx: float, dy: float,
                   segs: np.ndarray, tol: float):
    """Indices of segments a ray may hit, with float ray parameters, sorted by t."""
    ax, ay = segs[:, 0], segs[:, 1]
    ex, ey = segs[:, 2] - ax, segs[:, 3] - ay
    apx, apy = ax - px, ay - py
    dn = np.hypot(dx, dy)
    en = np.hypot(ex, ey)
    denom = dx * ey - dy * ex
    parallel = np.abs(denom) <= tol * dn * en
    with np.errstate(divide="ignore", invalid="ignore"):
        safe = np.where(parallel, 1.0, denom)
        t = (apx * ey - apy * ex) / safe
        s = (apx * dy - apy * dx) / safe
    keep = ~parallel & (t >= -tol) & (s >= -tol) & (s <= 1.0 + tol)

    # parallel segments count only when they sit (nearly) on the ray's line
    off = np.abs(apx * dy - apy * dx)
    on_line = parallel & (off <= tol * dn * (1.0 + np.abs(apx) + np.abs(apy)))
    ta = (apx * dx + apy * dy) / (dn * dn)
    tb = ((segs[:, 2] - px) * dx + (segs[:, 3] - py) * dy) / (dn * dn)
    lo, hi = np.minimum(ta, tb), np.maximum(ta, tb)
    tp = np.where(lo < 0.0, hi, lo)
    on_line &= tp >= -tol
    t = np.where(on_line, tp, t)
    keep |= on_line

    idx = np.nonzero(keep)[0]
    tk = t[idx]
    order = np.argsort(tk, kind="stable")
    return tk[order], idx[order].astype(np.int64)
