"""Name-dependent routing schemes sharing one table/label/forwarding core.

A landmark scheme stores, at every node ``w``, a shortest-path port to each
landmark and to each node of its cluster ``C(w) = {v : d(w, v) < d(v, l(v))}``
where ``l(v)`` is v's nearest landmark. A destination's label carries its
landmark and the port at that landmark which starts a shortest path back to
it. Cowen and TZ artifacts differ only in how the landmarks were chosen.

The trivial scheme keeps a port to every destination; its tables are
computed lazily, one destination-rooted BFS per column, so it scales to
graphs whose full tables would not fit in memory.
"""
from __future__ import annotations

import heapq
import math
from collections import OrderedDict
from dataclasses import dataclass, field, replace
from typing import Final

import numpy as np

from .graph import Graph, GraphError
from .kernels import backend

DELIVER: Final = "deliver"
KINDS = ("trivial", "cowen", "tz", "hierarchical")


class RoutingLoopError(RuntimeError):
    """Forwarding exceeded its hop budget; the artifacts are inconsistent."""


@dataclass(frozen=True)
class LandmarkSet:
    members: np.ndarray
    nearest: np.ndarray
    dist: np.ndarray
    rounds: int = 0

    def __contains__(self, v) -> bool:
        i = int(np.searchsorted(self.members, v))
        return i < len(self.members) and self.members[i] == v

    def __len__(self) -> int:
        return len(self.members)


def landmark_set(g: Graph, members) -> LandmarkSet:
    """Nearest landmark and its distance for every node (ties -> smallest id)."""
    members = np.unique(np.asarray(members, dtype=np.int32))
    if len(members) == 0:
        raise ValueError("landmark set is empty")
    if members[0] < 0 or members[-1] >= g.n:
        raise ValueError("landmark id out of range")
    nearest, dist = backend.nearest_landmarks(g.indptr, g.indices, members)
    if (dist < 0).any():
        raise GraphError("landmark set does not reach every node (graph disconnected?)")
    return LandmarkSet(members, nearest, dist)


@dataclass(frozen=True)
class NodeLabel:
    """Address of a node. For landmark schemes ``landmark``/``landmark_egress``
    locate it; hierarchical labels carry the cluster and its leader in
    ``landmark``; trivial labels are bare ids."""

    node: int
    landmark: int = -1
    landmark_egress: int = -1
    cluster: int = -1


@dataclass(frozen=True)
class PacketHeader:
    destination_label: NodeLabel


@dataclass(frozen=True)
class RoutingTable:
    owner: int
    entries: dict[int, int]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, dest) -> bool:
        return dest in self.entries


@dataclass(eq=False)
class SchemeArtifacts:
    """Tables and labels of one scheme on one graph.

    Per-node explicit entries (clusters, or own-area nodes for the hierarchy)
    live in a CSR layout sorted by destination. Entries shared by every node
    (landmarks, area leaders) are rows of ``group_port``: ``group_port[g, w]``
    is w's port toward ``groups[g]``.
    """

    kind: str
    n: int
    graph_fingerprint: str
    table_sizes: np.ndarray
    ex_ptr: np.ndarray
    ex_dest: np.ndarray
    ex_port: np.ndarray
    groups: np.ndarray
    group_of: np.ndarray
    anchor: np.ndarray
    egress: np.ndarray
    group_port: np.ndarray
    landmarks: LandmarkSet | None = None
    partition: object = None
    params: dict = field(default_factory=dict)
    _graph: Graph | None = field(default=None, repr=False)
    _columns: OrderedDict = field(default_factory=OrderedDict, repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._group_index = np.full(self.n, -1, dtype=np.int64)
        self._group_index[self.groups] = np.arange(len(self.groups))

    # -- tables -----------------------------------------------------------
    def _trivial_column(self, dest: int) -> np.ndarray:
        col = self._columns.get(dest)
        if col is None:
            g = self._graph
            _, col, _ = backend.bfs_tree(g.indptr, g.indices, int(dest))
            self._columns[dest] = col
            if len(self._columns) > 256:
                self._columns.popitem(last=False)
        return col

    def lookup(self, owner: int, dest: int) -> int | None:
        """Port stored at ``owner`` for ``dest``, or None if no entry."""
        if owner == dest:
            return None
        if self.kind == "trivial":
            return int(self._trivial_column(dest)[owner])
        lo, hi = int(self.ex_ptr[owner]), int(self.ex_ptr[owner + 1])
        i = lo + int(np.searchsorted(self.ex_dest[lo:hi], dest))
        if i < hi and self.ex_dest[i] == dest:
            return int(self.ex_port[i])
        gi = self._group_index[dest]
        if gi >= 0 and not (self.kind == "hierarchical" and gi == self.group_of[owner]):
            return int(self.group_port[gi, owner])
        return None

    def table(self, owner: int) -> RoutingTable:
        if self.kind == "trivial":
            entries = {d: int(self._trivial_column(d)[owner]) for d in range(self.n) if d != owner}
            return RoutingTable(owner, entries)
        entries = {}
        own = self.group_of[owner]
        for gi, a in enumerate(self.groups.tolist()):
            if a == owner or (self.kind == "hierarchical" and gi == own):
                continue
            entries[a] = int(self.group_port[gi, owner])
        lo, hi = int(self.ex_ptr[owner]), int(self.ex_ptr[owner + 1])
        entries.update(zip(self.ex_dest[lo:hi].tolist(), self.ex_port[lo:hi].tolist()))
        return RoutingTable(owner, dict(sorted(entries.items())))

    @property
    def tables(self) -> list[RoutingTable]:
        return [self.table(w) for w in range(self.n)]

    # -- labels -----------------------------------------------------------
    def label(self, v: int) -> NodeLabel:
        if self.kind == "trivial":
            return NodeLabel(int(v))
        if self.kind == "hierarchical":
            return NodeLabel(int(v), int(self.anchor[v]), -1, int(self.group_of[v]))
        return NodeLabel(int(v), int(self.anchor[v]), int(self.egress[v]))

    @property
    def labels(self) -> list[NodeLabel]:
        return [self.label(v) for v in range(self.n)]

    def header(self, v: int) -> PacketHeader:
        return PacketHeader(self.label(v))


def _explicit(n: int, owner: np.ndarray, member: np.ndarray, port: np.ndarray, nodes=None):
    if nodes is not None:
        owner = np.asarray(nodes, dtype=np.int64)[owner]
    order = np.lexsort((member, owner))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=n), out=ptr[1:])
    return ptr, np.ascontiguousarray(member[order], np.int32), np.ascontiguousarray(port[order], np.int32)


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise GraphError("graph is disconnected; run giant_component first")


def build_trivial(g: Graph) -> SchemeArtifacts:
    """Shortest-path port to every destination (n - 1 entries per node)."""
    _require_connected(g)
    n = g.n
    empty = np.zeros(0, dtype=np.int32)
    return SchemeArtifacts(
        kind="trivial",
        n=n,
        graph_fingerprint=g.fingerprint(),
        table_sizes=np.full(n, n - 1, dtype=np.int64),
        ex_ptr=np.zeros(n + 1, dtype=np.int64),
        ex_dest=empty,
        ex_port=empty,
        groups=empty,
        group_of=np.full(n, -1, dtype=np.int32),
        anchor=np.full(n, -1, dtype=np.int32),
        egress=np.full(n, -1, dtype=np.int32),
        group_port=np.zeros((0, n), dtype=np.int32),
        _graph=g,
    )


def default_s(n: int) -> int:
    s = math.isqrt(n)
    return s if s * s == n else s + 1


def select_landmarks(g: Graph, s: int | None = None, cap: float = 4.0, seed: int = 0) -> LandmarkSet:
    """Iterative landmark sampling that bounds every cluster by ``cap * n / s``.

    Starting from W = all nodes, each round adds every node of W to the
    landmark set with probability min(1, s/|W|), recomputes clusters and keeps
    in W only nodes whose cluster is still too large. Rounds that leave the
    landmark set empty keep W unchanged.
    """
    n = g.n
    if s is None:
        s = default_s(n)
    if not 1 <= s <= n:
        raise ValueError(f"s must be in [1, {n}], got {s}")
    if not cap > 0:
        raise ValueError("cap must be positive")
    rng = np.random.default_rng(seed)
    limit = math.floor(cap * n / s)
    chosen = np.zeros(n, dtype=bool)
    w = np.arange(n, dtype=np.int32)
    rounds = 0
    ls = None
    while len(w):
        rounds += 1
        p = min(1.0, s / len(w))
        chosen[w[rng.random(len(w)) < p]] = True
        if not chosen.any():
            continue
        ls = landmark_set(g, np.flatnonzero(chosen))
        sizes = backend.cluster_sizes(g.indptr, g.indices, w, ls.dist, limit)
        w = w[sizes > limit]
    return replace(ls, rounds=rounds)


def build_landmark_scheme(g: Graph, landmarks: LandmarkSet, kind: str) -> SchemeArtifacts:
    """Cluster tables, landmark entries and (node, landmark, egress) labels."""
    if kind not in ("cowen", "tz"):
        raise ValueError(f"landmark scheme kind must be 'cowen' or 'tz', got {kind!r}")
    n = g.n
    if len(landmarks.nearest) != n or (landmarks.dist < 0).any():
        raise GraphError("landmark set does not cover the graph")
    nodes = np.arange(n, dtype=np.int32)
    owner, member, port = backend.clusters(g.indptr, g.indices, nodes, landmarks.dist)
    ex_ptr, ex_dest, ex_port = _explicit(n, owner, member, port)
    groups = landmarks.members.astype(np.int32)
    gindex = np.full(n, -1, dtype=np.int32)
    gindex[groups] = np.arange(len(groups), dtype=np.int32)
    anchor = landmarks.nearest.astype(np.int32)
    group_port, egress = backend.landmark_ports(g.indptr, g.indices, groups, anchor)
    is_landmark = gindex >= 0
    sizes = np.diff(ex_ptr) + len(groups) - is_landmark
    return SchemeArtifacts(
        kind=kind,
        n=n,
        graph_fingerprint=g.fingerprint(),
        table_sizes=sizes.astype(np.int64),
        ex_ptr=ex_ptr,
        ex_dest=ex_dest,
        ex_port=ex_port,
        groups=groups,
        group_of=gindex[anchor],
        anchor=anchor,
        egress=egress,
        group_port=group_port,
        landmarks=landmarks,
    )


def build_tz(g: Graph, s: int | None = None, cap: float = 4.0, seed: int = 0) -> SchemeArtifacts:
    _require_connected(g)
    if s is None:
        s = default_s(g.n)
    ls = select_landmarks(g, s, cap, seed)
    art = build_landmark_scheme(g, ls, "tz")
    art.params.update(s=s, cap=cap, seed=seed, rounds=ls.rounds)
    return art


def ball_size(n: int, alpha: float) -> int:
    # guard against n**alpha landing a hair above an integer (1000**(1/3))
    return max(1, min(n, math.ceil(n ** alpha - 1e-9)))


def cowen_landmarks(g: Graph, alpha: float = 1 / 3) -> LandmarkSet:
    """Greedy dominating set for the balls of ``ceil(n^alpha)`` nearest nodes:
    repeatedly take the node lying in the most not-yet-hit balls (smallest id
    on ties) until every ball contains a landmark."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    n = g.n
    b = ball_size(n, alpha)
    balls = backend.balls(g.indptr, g.indices, b)
    flat = balls.ravel()
    owner = np.repeat(np.arange(n), b)
    order = np.argsort(flat, kind="stable")
    in_balls_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(flat, minlength=n), out=in_balls_ptr[1:])
    in_balls = owner[order]
    count = np.diff(in_balls_ptr).tolist()
    covered = np.zeros(n, dtype=bool)
    remaining = n
    heap = [(-c, x) for x, c in enumerate(count)]
    heapq.heapify(heap)
    chosen = []
    rows = balls.tolist()
    while remaining:
        c, x = heapq.heappop(heap)
        if -c != count[x]:
            heapq.heappush(heap, (-count[x], x))
            continue
        chosen.append(x)
        for w in in_balls[in_balls_ptr[x]:in_balls_ptr[x + 1]].tolist():
            if covered[w]:
                continue
            covered[w] = True
            remaining -= 1
            for y in rows[w]:
                count[y] -= 1
    return landmark_set(g, chosen)


def build_cowen(g: Graph, alpha: float = 1 / 3, seed: int | None = None) -> SchemeArtifacts:
    """Cowen-style landmarks (deterministic; ``seed`` is accepted for a uniform
    builder signature and ignored)."""
    _require_connected(g)
    ls = cowen_landmarks(g, alpha)
    art = build_landmark_scheme(g, ls, "cowen")
    art.params.update(alpha=alpha, ball_size=ball_size(g.n, alpha))
    return art


def forward(art: SchemeArtifacts, g: Graph, current: int, header: PacketHeader) -> int | str:
    """Next port for a packet at ``current``, or ``DELIVER``.

    Rules in order: at the destination deliver; use a table entry for the
    destination; at the destination's landmark use the label's egress port;
    otherwise head for the destination's landmark (or area leader).
    """
    label = header.destination_label
    v = label.node
    if current == v:
        return DELIVER
    port = art.lookup(current, v)
    if port is not None:
        return port
    if current == label.landmark:
        return label.landmark_egress
    port = art.lookup(current, label.landmark)
    if port is None:
        raise RoutingLoopError(f"node {current} has no entry for {v} nor its landmark {label.landmark}")
    return port


def route(art: SchemeArtifacts, g: Graph, src: int, dst: int) -> list[int]:
    """Node sequence from ``src`` to ``dst`` produced by repeated forwarding."""
    header = art.header(dst)
    path = [src]
    cur = src
    limit = 2 * g.n
    while True:
        step = forward(art, g, cur, header)
        if step == DELIVER:
            return path
        if len(path) > limit:
            start = path.index(cur)
            raise RoutingLoopError(f"loop guard tripped routing {src}->{dst}; cycle {path[start:]}")
        cur = g.neighbor_at(cur, step)
        path.append(cur)


@dataclass
class TableStats:
    avg_entries: float
    max_entries: int
    histogram: dict[int, int]


def table_stats(art: SchemeArtifacts) -> TableStats:
    sizes = art.table_sizes
    hist = np.bincount(sizes)
    return TableStats(
        avg_entries=float(sizes.mean()),
        max_entries=int(sizes.max()),
        histogram={k: int(c) for k, c in enumerate(hist) if c},
    )


def artifacts_to_json(art: SchemeArtifacts) -> dict:
    """Inspection layout: tables as [destination, port] arrays, labels as
    [node, landmark, egress] triples (hierarchy: [node, cluster, leader])."""
    if art.kind == "hierarchical":
        labels = [[v, int(art.group_of[v]), int(art.anchor[v])] for v in range(art.n)]
    else:
        labels = [[lab.node, lab.landmark, lab.landmark_egress] for lab in art.labels]
    out = {
        "kind": art.kind,
        "n": art.n,
        "graph_fingerprint": art.graph_fingerprint,
        "params": art.params,
        "tables": [[[d, p] for d, p in art.table(w).entries.items()] for w in range(art.n)],
        "labels": labels,
    }
    if art.landmarks is not None:
        out["landmarks"] = art.landmarks.members.tolist()
    if art.partition is not None:
        out["partition"] = art.partition.as_dict()
    return out
