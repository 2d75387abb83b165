"""Compare the compiled ray prefilter with the numpy fallback.

Run with ``python benchmarks/bench_kernel.py``.  Both backends answer the
same random queries against the sides of KS_5 (3072 sides) and the carpet
S_{7,2} (2353 obstacles); the script checks they agree and prints timings.
"""
import argparse
import time

import numpy as np

from fractal_billiards import _pykernel
from fractal_billiards.tables import build_carpet, build_koch_snowflake

try:
    from fractal_billiards import _ckernel
except ImportError:
    _ckernel = None


def queries(segs, n, rng):
    lo = segs[:, :2].min(axis=0)
    hi = segs[:, :2].max(axis=0)
    pts = rng.uniform(lo, hi, size=(n, 2))
    ang = rng.uniform(0, 2 * np.pi, size=n)
    return pts, np.stack([np.cos(ang), np.sin(ang)], axis=1)


def run(fn, segs, pts, dirs):
    t0 = time.perf_counter()
    out = [fn(p[0], p[1], d[0], d[1], segs, 1e-9) for p, d in zip(pts, dirs)]
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--queries", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for name, table in (("KS_5", build_koch_snowflake(5)), ("S_{7,2}", build_carpet(7, 2))):
        segs = table.segment_floats
        pts, dirs = queries(segs, args.queries, rng)
        t_py, out_py = run(_pykernel.ray_candidates, segs, pts, dirs)
        line = f"{name:8s} sides={len(segs):5d} numpy={t_py * 1e6 / args.queries:8.1f} us/query"
        if _ckernel is not None:
            t_c, out_c = run(_ckernel.ray_candidates, segs, pts, dirs)
            same = all(np.array_equal(a[1], b[1]) for a, b in zip(out_py, out_c))
            line += (f"  cython={t_c * 1e6 / args.queries:8.1f} us/query"
                     f"  speedup={t_py / t_c:5.2f}x  agree={same}")
        else:
            line += "  cython=not built"
        print(line)


if __name__ == "__main__":
    main()
