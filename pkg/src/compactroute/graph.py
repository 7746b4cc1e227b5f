"""Immutable undirected graphs with port numbering, BFS and topology statistics.

Node ids are dense integers ``0..n-1``. Each node's neighbours are stored in
ascending id order and a neighbour's *port* is its position in that list, so
"smallest port" and "smallest neighbour id" coincide everywhere.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .kernels import backend


class GraphError(ValueError):
    """Invalid graph input (duplicate edge, self-loop, bad id, disconnected)."""


@dataclass(frozen=True, eq=False)
class Graph:
    """CSR adjacency. ``labels[i]`` is the original id of dense node ``i``."""

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.labels):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    node_count = n
    edge_count = m

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def adjacency(self, u: int) -> list[tuple[int, int]]:
        """``(neighbour, port)`` pairs of ``u`` in port order."""
        return [(int(v), p) for p, v in enumerate(self.neighbors(u))]

    def neighbor_at(self, u: int, port: int) -> int:
        if not 0 <= port < self.degree(u):
            raise GraphError(f"node {u} has no port {port}")
        return int(self.indices[self.indptr[u] + port])

    def port_to(self, u: int, v: int) -> int:
        nb = self.neighbors(u)
        p = int(np.searchsorted(nb, v))
        if p >= len(nb) or nb[p] != v:
            raise GraphError(f"{v} is not adjacent to {u}")
        return p

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        p = int(np.searchsorted(nb, v))
        return p < len(nb) and nb[p] == v

    def edges(self) -> np.ndarray:
        """Edge array of shape (m, 2) with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int32), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def index_of(self, label: int) -> int:
        hits = np.flatnonzero(self.labels == label)
        if len(hits) == 0:
            raise GraphError(f"unknown node id {label}")
        return int(hits[0])

    def fingerprint(self) -> str:
        """``n:m:sha256`` over the sorted dense edge list."""
        digest = hashlib.sha256(np.ascontiguousarray(self.edges(), dtype="<i4").tobytes())
        return f"{self.n}:{self.m}:{digest.hexdigest()[:16]}"

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        dist, _, _ = backend.bfs_tree(self.indptr, self.indices, 0)
        return bool((dist >= 0).all())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _build(n: int, us: np.ndarray, vs: np.ndarray, labels: np.ndarray) -> Graph:
    src = np.concatenate([us, vs]).astype(np.int64)
    dst = np.concatenate([vs, us]).astype(np.int64)
    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int32)
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int32)
    np.cumsum(counts, out=indptr[1:])
    return Graph(indptr, indices, np.asarray(labels, dtype=np.int64))


def from_edges(edges: Iterable[Sequence[int]], lines: Sequence[int] | None = None) -> Graph:
    """Build a graph from an edge list, re-indexing ids in first-seen order.

    Duplicate edges (in either orientation) and self-loops are rejected; the
    error names the offending pair and its line (``lines[i]`` when given,
    otherwise the 1-based position in ``edges``).
    """
    index: dict[int, int] = {}
    us: list[int] = []
    vs: list[int] = []
    seen: set[tuple[int, int]] = set()
    for i, e in enumerate(edges):
        line = lines[i] if lines is not None else i + 1
        try:
            a, b = (int(x) for x in e)
        except (TypeError, ValueError):
            raise GraphError(f"line {line}: expected a pair of integers, got {e!r}") from None
        if a < 0 or b < 0:
            raise GraphError(f"line {line}: negative node id in ({a}, {b})")
        if a == b:
            raise GraphError(f"line {line}: self-loop ({a}, {b})")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise GraphError(f"line {line}: duplicate edge ({a}, {b})")
        seen.add(key)
        us.append(index.setdefault(a, len(index)))
        vs.append(index.setdefault(b, len(index)))
    labels = np.fromiter(index.keys(), dtype=np.int64, count=len(index))
    return _build(len(index), np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64), labels)


def from_arrays(n: int, us: np.ndarray, vs: np.ndarray, labels: np.ndarray | None = None) -> Graph:
    """Fast path for generators: dense ids already assigned, edges known simple."""
    if labels is None:
        labels = np.arange(n, dtype=np.int64)
    return _build(n, np.asarray(us), np.asarray(vs), labels)


@dataclass(frozen=True)
class BfsTree:
    root: int
    dist: np.ndarray
    parent_port: np.ndarray
    first_port: np.ndarray = field(repr=False)

    UNREACHABLE = -1


def bfs(g: Graph, src: int) -> BfsTree:
    """Hop distances from ``src``.

    ``parent_port[v]`` is the port at ``v`` of its smallest-id neighbour one
    hop closer to ``src``; ``first_port[v]`` is the smallest port at ``src``
    that starts a shortest path to ``v``.
    """
    if not 0 <= src < g.n:
        raise GraphError(f"source {src} out of range [0, {g.n})")
    dist, parent, first = backend.bfs_tree(g.indptr, g.indices, int(src))
    return BfsTree(int(src), dist, parent, first)


def components(g: Graph) -> np.ndarray:
    """Component index per node (scipy connected components)."""
    adj = sparse.csr_matrix(
        (np.ones(len(g.indices), dtype=np.int8), g.indices, g.indptr), shape=(g.n, g.n)
    )
    _, comp = csgraph.connected_components(adj, directed=False)
    return comp


def induced(g: Graph, keep: np.ndarray) -> Graph:
    """Subgraph on the nodes ``keep`` (in that order), re-indexed densely."""
    keep = np.asarray(keep, dtype=np.int64)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    e = g.edges()
    mask = (new_id[e[:, 0]] >= 0) & (new_id[e[:, 1]] >= 0)
    e = e[mask]
    return _build(len(keep), new_id[e[:, 0]], new_id[e[:, 1]], g.labels[keep])


def giant_component(g: Graph) -> Graph:
    """Largest connected component; size ties go to the component holding the
    smallest original id. Relative node order is preserved."""
    if g.n == 0:
        raise GraphError("empty graph has no giant component")
    comp = components(g)
    sizes = np.bincount(comp)
    min_label = np.full(len(sizes), np.iinfo(np.int64).max)
    np.minimum.at(min_label, comp, g.labels)
    best = min(range(len(sizes)), key=lambda c: (-sizes[c], min_label[c]))
    return induced(g, np.flatnonzero(comp == best))


def degree_ccdf(g: Graph) -> list[tuple[int, float]]:
    """``(k, fraction of nodes with degree >= k)`` for k = 1..max_degree."""
    if g.n == 0:
        raise GraphError("degree_ccdf needs at least one node")
    deg = g.degrees()
    kmax = int(deg.max()) if len(deg) else 0
    counts = np.bincount(deg, minlength=kmax + 1)
    at_least = np.cumsum(counts[::-1])[::-1]
    return [(k, float(at_least[k]) / g.n) for k in range(1, kmax + 1)]


def fit_loglog_slope(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log y against log x."""
    if len(points) < 2:
        raise ValueError("need at least 2 points to fit a slope")
    xy = np.asarray(points, dtype=float)
    if (xy <= 0).any():
        raise ValueError("log-log fit needs positive coordinates")
    lx, ly = np.log(xy[:, 0]), np.log(xy[:, 1])
    lx = lx - lx.mean()
    return float((lx * (ly - ly.mean())).sum() / (lx * lx).sum())


def ccdf_slope(g: Graph) -> float:
    """Log-log slope of the degree CCDF over its nonzero support."""
    pts = [(k, f) for k, f in degree_ccdf(g) if f > 0]
    return fit_loglog_slope(pts) if len(pts) >= 2 else 0.0


@dataclass
class GraphStats:
    n: int
    m: int
    avg_degree: float
    max_degree: int
    avg_distance: float
    distance_histogram: dict[int, int]
    pct_2_to_4: float
    clustering: float
    mode: str
    pair_count: int
    seed: int | None = None

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["distance_histogram"] = {str(k): v for k, v in sorted(self.distance_histogram.items())}
        return d


def local_clustering(g: Graph) -> np.ndarray:
    """Local clustering coefficient per node; degree < 2 gives 0."""
    adj = sparse.csr_matrix(
        (np.ones(len(g.indices), dtype=np.int64), g.indices, g.indptr), shape=(g.n, g.n)
    )
    tri = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel() / 2.0
    deg = g.degrees().astype(float)
    possible = deg * (deg - 1) / 2.0
    out = np.zeros(g.n)
    np.divide(tri, possible, out=out, where=possible > 0)
    return out


def unordered_pairs(n: int, budget: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, bool]:
    """All unordered pairs when they fit in ``budget``, else ``budget``
    distinct pairs drawn uniformly. Returns (u, v, exact) with u < v."""
    total = n * (n - 1) // 2
    if total <= budget:
        u, v = np.triu_indices(n, k=1)
        return u.astype(np.int32), v.astype(np.int32), True
    idx = np.sort(rng.choice(total, size=budget, replace=False))
    u, v = _decode_unordered(idx, n)
    return u, v, False


def _decode_unordered(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # row u holds pairs (u, u+1..n-1); start(u) = u*(2n-u-1)/2
    idx = idx.astype(np.int64)
    u = np.floor((2 * n - 1 - np.sqrt((2.0 * n - 1) ** 2 - 8.0 * idx)) / 2).astype(np.int64)
    start = u * (2 * n - u - 1) // 2
    u = np.where(start > idx, u - 1, u)
    start = u * (2 * n - u - 1) // 2
    nxt = (u + 1) * (2 * n - u - 2) // 2
    u = np.where(idx >= nxt, u + 1, u)
    start = u * (2 * n - u - 1) // 2
    v = u + 1 + (idx - start)
    return u.astype(np.int32), v.astype(np.int32)


def group_by_first(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Stable grouping of pairs by ``u``: (targets, ptr, others, order)."""
    order = np.argsort(u, kind="stable")
    us = u[order]
    targets, starts = np.unique(us, return_index=True)
    ptr = np.append(starts, len(us)).astype(np.int64)
    return targets.astype(np.int32), ptr, np.ascontiguousarray(v[order], dtype=np.int32), order


def pair_distances(g: Graph, u: np.ndarray, v: np.ndarray, workers: int = 1) -> np.ndarray:
    """d(u[i], v[i]) for every pair, in input order."""
    targets, ptr, others, order = group_by_first(np.asarray(u, np.int32), np.asarray(v, np.int32))
    out = np.empty(len(others), dtype=np.int32)
    for lo, hi, part in _chunked(targets, ptr, workers, lambda t, p, o: backend.distances_to(
            g.indptr, g.indices, t, p, o), others):
        out[lo:hi] = part
    res = np.empty_like(out)
    res[order] = out
    return res


def _chunked(targets, ptr, workers, fn, *per_pair):
    """Split grouped work into contiguous target chunks and run them, possibly
    on threads. Yields (lo, hi, result) in chunk order."""
    from concurrent.futures import ThreadPoolExecutor

    nchunks = max(1, min(int(workers), len(targets))) if len(targets) else 1
    bounds = np.linspace(0, len(targets), nchunks + 1).astype(np.int64)
    jobs = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        lo, hi = int(ptr[a]), int(ptr[b])
        sub_ptr = (ptr[a:b + 1] - lo).astype(np.int64)
        args = [np.ascontiguousarray(targets[a:b])] + [sub_ptr] + [
            np.ascontiguousarray(x[lo:hi]) for x in per_pair]
        jobs.append((lo, hi, args))
    if workers <= 1 or len(jobs) == 1:
        for lo, hi, args in jobs:
            yield lo, hi, fn(*args)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [(lo, hi, pool.submit(fn, *args)) for lo, hi, args in jobs]
        for lo, hi, fut in futures:
            yield lo, hi, fut.result()


def stats(g: Graph, pair_budget: int = 1_000_000, seed: int = 0, workers: int = 1) -> GraphStats:
    """Degree, distance and clustering statistics.

    Distances are exact over all unordered pairs when there are at most
    ``pair_budget`` of them, otherwise computed over that many distinct pairs
    sampled uniformly with ``numpy.random.default_rng(seed)`` (PCG64).
    """
    if pair_budget < 1:
        raise ValueError("pair_budget must be >= 1")
    if g.n < 2:
        raise GraphError("stats needs at least 2 nodes")
    if not g.is_connected():
        raise GraphError("graph is disconnected; run giant_component first")
    u, v, exact = unordered_pairs(g.n, pair_budget, np.random.default_rng(seed))
    d = pair_distances(g, u, v, workers)
    hist = np.bincount(d)
    mid = int(((d >= 2) & (d <= 4)).sum())
    deg = g.degrees()
    return GraphStats(
        n=g.n,
        m=g.m,
        avg_degree=2.0 * g.m / g.n,
        max_degree=int(deg.max()),
        avg_distance=float(d.mean()),
        distance_histogram={k: int(c) for k, c in enumerate(hist) if c},
        pct_2_to_4=mid / len(d),
        clustering=float(local_clustering(g).mean()),
        mode="exact" if exact else "sampled",
        pair_count=len(d),
        seed=None if exact else seed,
    )

