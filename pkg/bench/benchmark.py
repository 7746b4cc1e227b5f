"""Time the compiled kernels against their pure-Python twins.

    python bench/benchmark.py --n 2000 --repeat 3

Each kernel runs on identical inputs under both backends; outputs are
compared before timings are reported.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from compactroute import _pykernels
from compactroute.evaluation import ordered_pairs
from compactroute.graph import group_by_first
from compactroute.schemes import build_tz, default_s, select_landmarks
from compactroute.topology import GenConfig, gen_preferential

try:
    from compactroute import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases(g, pairs: int, seed: int):
    ip, ix = g.indptr, g.indices
    ls = select_landmarks(g, default_s(g.n), 4.0, seed)
    art = build_tz(g, seed=seed)
    u, v, _ = ordered_pairs(g.n, pairs, np.random.default_rng(seed))
    t, p, o, _ = group_by_first(v, u)
    nodes = np.arange(g.n, dtype=np.int32)
    src = np.ascontiguousarray(o, np.int32)
    dst = np.ascontiguousarray(np.repeat(t, np.diff(p)), np.int32)
    return {
        "bfs_tree": ("bfs_tree", (ip, ix, 0)),
        "distances_to": ("distances_to", (ip, ix, t, p, o)),
        "nearest_landmarks": ("nearest_landmarks", (ip, ix, ls.members)),
        "clusters": ("clusters", (ip, ix, nodes, ls.dist)),
        "landmark_ports": ("landmark_ports", (ip, ix, ls.members, ls.nearest)),
        "balls": ("balls", (ip, ix, 13)),
        "route_lengths": ("route_lengths", (ip, ix, art.ex_ptr, art.ex_dest, art.ex_port, art.group_of,
                                            art.anchor, art.egress, art.group_port, src, dst, 2 * g.n)),
    }


def timed(fn, args, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def equal(a, b) -> bool:
    if isinstance(a, tuple):
        return all(equal(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--pairs", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return 1
    g = gen_preferential(GenConfig(n=args.n, m_attach=2, seed=args.seed))
    print(f"preferential graph n={g.n} m={g.m}; best of {args.repeat}")
    print(f"{'kernel':<18}{'cython s':>12}{'python s':>12}{'speedup':>10}  match")
    for name, (fn, fargs) in cases(g, args.pairs, args.seed).items():
        tc, oc = timed(getattr(_kernels, fn), fargs, args.repeat)
        tp, op = timed(getattr(_pykernels, fn), fargs, 1 if args.repeat > 1 else args.repeat)
        print(f"{name:<18}{tc:>12.4f}{tp:>12.4f}{tp / max(tc, 1e-9):>9.1f}x  {equal(oc, op)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
