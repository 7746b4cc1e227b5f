"""Stretch, table-size and neighbor-reinsertion measurement; scaling sweeps.

Ordered pairs are the unit of measurement. Pair sets are processed grouped
by destination (one BFS per destination gives both the shortest distance
and, for the trivial scheme, the table column) and results are reassembled
in a fixed order, so reports do not depend on the worker count.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graph import Graph, _chunked, fit_loglog_slope, group_by_first
from .kernels import backend
from .schemes import RoutingLoopError, SchemeArtifacts, table_stats

HIST_EDGES = (1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 6.0, 10.0)
BOUNDED_KINDS = ("cowen", "tz")


class StretchBoundError(AssertionError):
    """A Cowen/TZ route exceeded three times the shortest distance."""


class SweepError(RuntimeError):
    """A sweep step failed; ``n`` names the graph size, ``__cause__`` the error."""

    def __init__(self, n: int, exc: BaseException):
        super().__init__(f"sweep failed at n={n}: {exc}")
        self.n = n


def derive_seed(seed: int, *names) -> int:
    """Named sub-seed: stages can be reproduced in isolation."""
    key = ":".join([str(seed), *map(str, names)]).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little") >> 1


def ordered_pairs(n: int, budget: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, bool]:
    """All ordered pairs (u != v) if there are at most ``budget``, else
    ``budget`` distinct ones drawn uniformly. Returned in source-major order."""
    total = n * (n - 1)
    if total <= budget:
        idx = np.arange(total, dtype=np.int64)
        exact = True
    else:
        idx = np.sort(rng.choice(total, size=budget, replace=False))
        exact = False
    u = idx // (n - 1)
    r = idx % (n - 1)
    v = r + (r >= u)
    return u.astype(np.int32), v.astype(np.int32), exact


def adjacent_pairs(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    src = np.repeat(np.arange(g.n, dtype=np.int32), g.degrees())
    return src, np.asarray(g.indices, dtype=np.int32)


def route_pairs(art: SchemeArtifacts, g: Graph, src: np.ndarray, dst: np.ndarray,
                workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """(routed hops, shortest distance) for each pair, in input order."""
    if art.graph_fingerprint != g.fingerprint():
        raise ValueError("artifacts were built on a different graph")
    src = np.asarray(src, dtype=np.int32)
    dst = np.asarray(dst, dtype=np.int32)
    targets, ptr, others, order = group_by_first(dst, src)
    hops = np.empty(len(src), dtype=np.int32)
    dist = np.empty(len(src), dtype=np.int32)
    guard = 2 * g.n
    if art.kind == "trivial":
        def run(t, p, o):
            return backend.trivial_routes(g.indptr, g.indices, t, p, o, guard)
    else:
        def run(t, p, o):
            d = backend.distances_to(g.indptr, g.indices, t, p, o)
            return _route(art, g, o, np.repeat(t, np.diff(p)), guard), d
    for lo, hi, (h, d) in _chunked(targets, ptr, workers, run, others):
        hops[lo:hi] = h
        dist[lo:hi] = d
    _check(art, hops, src[order], dst[order])
    out_h = np.empty_like(hops)
    out_d = np.empty_like(dist)
    out_h[order] = hops
    out_d[order] = dist
    return out_h, out_d


def _route(art, g, src, dst, guard):
    return backend.route_lengths(g.indptr, g.indices, art.ex_ptr, art.ex_dest, art.ex_port,
                                 art.group_of, art.anchor, art.egress, art.group_port,
                                 np.ascontiguousarray(src, np.int32),
                                 np.ascontiguousarray(dst, np.int32), guard)


def _check(art, hops, src, dst):
    bad = np.flatnonzero(hops < 0)
    if len(bad):
        i = bad[0]
        raise RoutingLoopError(
            f"{art.kind}: routing {src[i]}->{dst[i]} failed (code {hops[i]}); "
            f"{len(bad)} broken pairs")


def adjacent_hops(art: SchemeArtifacts, g: Graph, workers: int = 1) -> np.ndarray:
    """Routed hop count for every ordered adjacent pair, in CSR order.

    Cached on the artifacts: stretch and reinsertion both need it.
    """
    cached = art.cache.get("adjacent_hops")
    if cached is not None:
        return cached
    au, av = adjacent_pairs(g)
    if art.kind == "trivial":
        # the destination-rooted BFS port at a neighbour of the destination is
        # the direct link (the only neighbour at distance 0), so only the
        # shortest-distance computation would be left to do
        hops = np.ones(len(au), dtype=np.int32)
    else:
        if art.graph_fingerprint != g.fingerprint():
            raise ValueError("artifacts were built on a different graph")
        hops = np.empty(len(au), dtype=np.int32)
        bounds = np.linspace(0, len(au), max(1, workers) + 1).astype(np.int64)
        for a, b in zip(bounds[:-1], bounds[1:]):
            hops[a:b] = _route(art, g, au[a:b], av[a:b], 2 * g.n)
        _check(art, hops, au, av)
    art.cache["adjacent_hops"] = hops
    return hops


@dataclass
class StretchReport:
    scheme: str
    graph_fingerprint: str
    mode: str
    seed: int | None
    pair_count: int
    avg_stretch: float
    max_stretch: float
    stretch_histogram: list[tuple[str, int]]
    avg_stretch_len1: float
    frac_shortest: float
    adjacent_pairs: int

    def as_dict(self) -> dict:
        return asdict(self)


def _histogram(ratio: np.ndarray) -> list[tuple[str, int]]:
    out = [("1", int((ratio == 1.0).sum()))]
    lo = 1.0
    for hi in HIST_EDGES[1:]:
        out.append((f"({lo:g},{hi:g}]", int(((ratio > lo) & (ratio <= hi)).sum())))
        lo = hi
    out.append((f">{lo:g}", int((ratio > lo).sum())))
    return out


def measure_stretch(art: SchemeArtifacts, g: Graph, pair_budget: int = 100_000, seed: int = 0,
                    workers: int = 1, check_bound: bool = True) -> StretchReport:
    """Stretch over all ordered pairs when n(n-1) <= pair_budget, otherwise
    over ``pair_budget`` uniformly sampled ordered pairs. Every adjacent pair
    is routed as well to give the length-1 stretch.

    Cowen/TZ routes longer than three times the shortest distance raise
    StretchBoundError unless ``check_bound`` is off.
    """
    u, v, exact = ordered_pairs(g.n, pair_budget, np.random.default_rng(seed))
    hops, dist = route_pairs(art, g, u, v, workers)
    ratio = hops / dist
    if (ratio < 1).any():
        raise RoutingLoopError("a routed path is shorter than the shortest path")
    ahops = adjacent_hops(art, g, workers)
    report = StretchReport(
        scheme=art.kind,
        graph_fingerprint=art.graph_fingerprint,
        mode="exact" if exact else "sampled",
        seed=None if exact else seed,
        pair_count=len(ratio),
        avg_stretch=float(ratio.mean()),
        max_stretch=float(ratio.max()),
        stretch_histogram=_histogram(ratio),
        avg_stretch_len1=float(ahops.mean()),
        frac_shortest=float((hops == dist).mean()),
        adjacent_pairs=len(ahops),
    )
    if check_bound and art.kind in BOUNDED_KINDS:
        worst = np.flatnonzero(hops > 3 * dist)
        if len(worst) or (ahops > 3).any():
            i = worst[0] if len(worst) else None
            where = f"{u[i]}->{v[i]}" if i is not None else "an adjacent pair"
            raise StretchBoundError(f"{art.kind}: stretch above 3 at {where}")
    return report


@dataclass
class ReinsertionReport:
    scheme: str
    graph_fingerprint: str
    violating_adjacencies: int
    base_avg_table: float
    base_max_table: int
    augmented_avg_table: float
    augmented_max_table: int

    def as_dict(self) -> dict:
        return asdict(self)


def neighbor_reinsertion(art: SchemeArtifacts, g: Graph, workers: int = 1) -> ReinsertionReport:
    """Route every ordered adjacent pair; each one routed over more than one
    hop costs one extra (direct) entry at its source."""
    au, _ = adjacent_pairs(g)
    hops = adjacent_hops(art, g, workers)
    bad = hops > 1
    extra = np.bincount(au[bad], minlength=g.n)
    base = art.table_sizes
    aug = base + extra
    return ReinsertionReport(
        scheme=art.kind,
        graph_fingerprint=art.graph_fingerprint,
        violating_adjacencies=int(bad.sum()),
        base_avg_table=float(base.mean()),
        base_max_table=int(base.max()),
        augmented_avg_table=float(aug.mean()),
        augmented_max_table=int(aug.max()),
    )


@dataclass
class SchemeSummary:
    """One scheme on one graph: table stats, stretch and reinsertion."""

    scheme: str
    graph_fingerprint: str
    n: int
    m: int
    avg_table: float
    max_table: int
    stretch: StretchReport
    reinsertion: ReinsertionReport
    params: dict = field(default_factory=dict)

    def row(self) -> dict:
        return {
            "scheme": self.scheme,
            "graph_fingerprint": self.graph_fingerprint,
            "n": self.n,
            "m": self.m,
            "avg_table": self.avg_table,
            "max_table": self.max_table,
            "avg_stretch": self.stretch.avg_stretch,
            "max_stretch": self.stretch.max_stretch,
            "avg_stretch_len1": self.stretch.avg_stretch_len1,
            "violating_adjacencies": self.reinsertion.violating_adjacencies,
            "augmented_avg_table": self.reinsertion.augmented_avg_table,
        }

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "graph_fingerprint": self.graph_fingerprint,
            "n": self.n,
            "m": self.m,
            "params": self.params,
            "tables": {"avg_entries": self.avg_table, "max_entries": self.max_table},
            "stretch": self.stretch.as_dict(),
            "reinsertion": self.reinsertion.as_dict(),
        }


def evaluate(art: SchemeArtifacts, g: Graph, pair_budget: int = 100_000, seed: int = 0,
             workers: int = 1) -> SchemeSummary:
    ts = table_stats(art)
    return SchemeSummary(
        scheme=art.kind,
        graph_fingerprint=art.graph_fingerprint,
        n=g.n,
        m=g.m,
        avg_table=ts.avg_entries,
        max_table=ts.max_entries,
        stretch=measure_stretch(art, g, pair_budget, seed, workers),
        reinsertion=neighbor_reinsertion(art, g, workers),
        params=dict(art.params),
    )


# ---------------------------------------------------------------- reports

STRETCH_COLUMNS = ("scheme", "graph_fingerprint", "mode", "seed", "pair_count", "avg_stretch",
                   "max_stretch", "avg_stretch_len1", "frac_shortest", "adjacent_pairs")
TABLE_COLUMNS = ("scheme", "graph_fingerprint", "n", "m", "avg_entries", "max_entries")
REINSERTION_COLUMNS = ("scheme", "graph_fingerprint", "violating_adjacencies", "base_avg_table",
                       "base_max_table", "augmented_avg_table", "augmented_max_table")
SWEEP_COLUMNS = ("n", "m", "scheme", "avg_table", "max_table", "avg_stretch", "max_stretch",
                 "avg_stretch_len1", "violating_adjacencies", "augmented_avg_table",
                 "augmented_max_table")
COMPARE_COLUMNS = ("scheme", "graph_fingerprint", "n", "m", "avg_table", "max_table",
                   "avg_stretch", "max_stretch", "avg_stretch_len1", "violating_adjacencies",
                   "augmented_avg_table")


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return "" if x is None else str(x)


def to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def stretch_row(r: StretchReport) -> dict:
    return {c: getattr(r, c) for c in STRETCH_COLUMNS}


def table_row(s: SchemeSummary) -> dict:
    return {"scheme": s.scheme, "graph_fingerprint": s.graph_fingerprint, "n": s.n, "m": s.m,
            "avg_entries": s.avg_table, "max_entries": s.max_table}


# ------------------------------------------------------------- comparison

@dataclass
class ComparisonTable:
    graph_fingerprint: str
    rows: list[dict]

    def to_csv(self) -> str:
        return to_csv(self.rows, COMPARE_COLUMNS)

    def to_json(self) -> str:
        return to_json({"graph_fingerprint": self.graph_fingerprint, "rows": self.rows})


def compare(summaries: Sequence[SchemeSummary]) -> ComparisonTable:
    """Align per-scheme results measured on the same graph."""
    if not summaries:
        raise ValueError("nothing to compare")
    fps = {s.graph_fingerprint for s in summaries}
    if len(fps) != 1:
        raise ValueError(f"reports come from different graphs: {sorted(fps)}")
    return ComparisonTable(fps.pop(), [s.row() for s in summaries])


def summary_from_dict(d: dict) -> SchemeSummary:
    """Inverse of SchemeSummary.as_dict (for comparing saved eval reports)."""
    st = dict(d["stretch"])
    st["stretch_histogram"] = [tuple(x) for x in st["stretch_histogram"]]
    return SchemeSummary(
        scheme=d["scheme"],
        graph_fingerprint=d["graph_fingerprint"],
        n=d["n"],
        m=d["m"],
        avg_table=d["tables"]["avg_entries"],
        max_table=d["tables"]["max_entries"],
        stretch=StretchReport(**st),
        reinsertion=ReinsertionReport(**d["reinsertion"]),
        params=d.get("params", {}),
    )


# ------------------------------------------------------------------ sweep

@dataclass
class SweepReport:
    points: list[dict]
    fitted_exponents: dict[str, dict[str, float]]
    sizes: list[int]
    schemes: list[str]
    seed: int
    generator: dict
    pair_budget: int

    def as_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        return to_csv(self.points, SWEEP_COLUMNS)

    def exponents_csv(self) -> str:
        rows = [{"scheme": k, **v} for k, v in self.fitted_exponents.items()]
        return to_csv(rows, ("scheme", "avg_table_exponent", "max_table_exponent"))


def sweep(template, sizes: Sequence[int], schemes: Sequence[str], pair_budget: int = 100_000,
          seed: int = 0, builders: dict[str, Callable] | None = None, workers: int = 1,
          progress: Callable[[str], None] | None = None) -> SweepReport:
    """Generate one graph per size, build and evaluate every scheme on it and
    fit log-log exponents of table size against n."""
    from dataclasses import replace

    from .topology import generate

    sizes = list(sizes)
    if len(sizes) < 3:
        raise ValueError("a sweep needs at least 3 sizes to fit exponents")
    if sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise ValueError("sizes must be strictly ascending")
    builders = builders or default_builders()
    unknown = [k for k in schemes if k not in builders]
    if unknown:
        raise ValueError(f"unknown scheme(s) {unknown}")
    points = []
    for n in sizes:
        try:
            cfg = replace(template, n=n, seed=derive_seed(seed, "graph", n))
            g = generate(cfg)
            for kind in schemes:
                art = builders[kind](g, derive_seed(seed, kind, n))
                s = evaluate(art, g, pair_budget, derive_seed(seed, "pairs", n), workers)
                row = s.row()
                row.update(max_stretch=s.stretch.max_stretch,
                           augmented_max_table=s.reinsertion.augmented_max_table)
                del row["graph_fingerprint"]
                points.append(row)
                if progress:
                    progress(f"n={n} {kind}: avg_table={s.avg_table:.1f} max_table={s.max_table} "
                             f"avg_stretch={s.stretch.avg_stretch:.4f}")
        except Exception as exc:
            raise SweepError(n, exc) from exc
    exps = {}
    for kind in schemes:
        pts = [p for p in points if p["scheme"] == kind]
        exps[kind] = {
            "avg_table_exponent": fit_loglog_slope([(p["n"], p["avg_table"]) for p in pts]),
            "max_table_exponent": fit_loglog_slope([(p["n"], p["max_table"]) for p in pts]),
        }
    return SweepReport(points, exps, sizes, list(schemes), seed, asdict(template), pair_budget)


def default_builders(s: int | None = None, cap: float = 4.0, alpha: float = 1 / 3,
                     k: int | None = None) -> dict[str, Callable]:
    from .hierarchical import build_hierarchical
    from .schemes import build_cowen, build_trivial, build_tz

    return {
        "trivial": lambda g, sd: build_trivial(g),
        "tz": lambda g, sd: build_tz(g, s, cap, sd),
        "cowen": lambda g, sd: build_cowen(g, alpha, sd),
        "hierarchical": lambda g, sd: build_hierarchical(g, k, sd),
    }
