# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prefilter for ray casting against many segments.

Floats here only *select* candidate segments; every decision is re-made
exactly by the caller, so the tolerance just has to be generous.
"""
from libc.math cimport fabs, sqrt

import numpy as np
cimport numpy as cnp

cnp.import_array()


def ray_candidates(double px, double py, double dx, double dy,
                   double[:, ::1] segs, double tol):
    """Indices of segments a ray may hit, with float ray parameters, sorted by t."""
    cdef Py_ssize_t n = segs.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double ax, ay, ex, ey, apx, apy, denom, t, s, dn, en, scale, ta, tb
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ts = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx = np.empty(n, dtype=np.int64)
    dn = sqrt(dx * dx + dy * dy)
    for i in range(n):
        ax = segs[i, 0]
        ay = segs[i, 1]
        ex = segs[i, 2] - ax
        ey = segs[i, 3] - ay
        apx = ax - px
        apy = ay - py
        en = sqrt(ex * ex + ey * ey)
        denom = dx * ey - dy * ex
        scale = dn * en
        if fabs(denom) <= tol * scale:
            # (nearly) parallel: keep it if the segment is (nearly) on the line
            if fabs(apx * dy - apy * dx) > tol * dn * (1.0 + fabs(apx) + fabs(apy)):
                continue
            ta = (apx * dx + apy * dy) / (dn * dn)
            tb = ((segs[i, 2] - px) * dx + (segs[i, 3] - py) * dy) / (dn * dn)
            t = ta if ta < tb else tb
            if t < 0.0:
                t = ta if ta > tb else tb
            if t < -tol:
                continue
        else:
            t = (apx * ey - apy * ex) / denom
            s = (apx * dy - apy * dx) / denom
            if t < -tol or s < -tol or s > 1.0 + tol:
                continue
        ts[count] = t
        idx[count] = i
        count += 1
    order = np.argsort(ts[:count], kind="stable")
    return ts[:count][order], idx[:count][order]
