#!/usr/bin/env python3
"""Benchmark the compiled sampling kernels against the pure-Python fallback.

Times one sequence-of-balls run per body and the rejection sampler in both
backends on identical streams, checks that the results agree, and prints the
speedup.  Usage: python benchmarks/bench_walk.py [--quick]
"""

import argparse
import sys
import time

import numpy as np

from cutvol import _walk_py
from cutvol import estimate as es
from cutvol import graphs as gr
from cutvol import polytope as pt
from cutvol.lp import chebyshev_center

try:
    from cutvol import _walk
except ImportError:
    print("compiled extension not built; nothing to compare")
    sys.exit(1)


def _hbody(n):
    h = pt.met_hrep(n)
    A = np.array([[float(v) for v in a] for a, _ in h.rows])
    b = np.array([float(bb) for _, bb in h.rows])
    center, r = chebyshev_center(h)
    return A, b - A @ center, r


def time_fn(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller sample counts")
    args = parser.parse_args()
    scale = 4 if args.quick else 1

    rows = []

    for n in (3, 4):
        A, b, r = _hbody(n)
        d = A.shape[1]
        cfg = es.WalkConfig().resolve(d)
        radii = np.array([r * cfg.radius_growth**k for k in range(6)])
        samp = cfg.samples_per_phase // scale
        a1, t_c = time_fn(_walk.sob_h_run, A, b, radii, cfg.walk_len, samp, 0, 1)
        a2, t_p = time_fn(_walk_py.sob_h_run, A, b, radii, cfg.walk_len, samp, 0, 1)
        assert np.array_equal(a1, a2)
        rows.append((f"sob_h met_{n} (dim {d})", t_c, t_p))

    V = np.array(
        [[float(c) for c in v] for v in pt.cut_vertices(gr.make_complete(4)).vertices]
    )
    V -= V.mean(axis=0)
    radii = np.array([0.25 * 1.26**k for k in range(5)])
    samp = 400 // scale
    (h1, c1), t_c = time_fn(_walk.sob_v_run, V, radii, 8, samp, samp, 0, 1)
    (h2, c2), t_p = time_fn(_walk_py.sob_v_run, V, radii, 8, samp, samp, 0, 1)
    assert h1 == h2 and np.array_equal(c1, c2)
    rows.append(("sob_v cut(K_4) (dim 6)", t_c, t_p))

    nrej = 200_000 // scale
    r1, t_c = time_fn(_walk.rejection_run, 4, nrej, 9)
    r2, t_p = time_fn(_walk_py.rejection_run, 4, nrej, 9)
    assert r1 == r2
    rows.append((f"rejection n=4 ({nrej} samples)", t_c, t_p))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel'.ljust(width)}  compiled      pure          speedup")
    for name, t_c, t_p in rows:
        print(f"{name.ljust(width)}  {t_c:>9.4f} s   {t_p:>9.4f} s   {t_p / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
