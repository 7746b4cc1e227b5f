"""Two-level hierarchical routing baseline.

Nodes are grouped into connected areas, each with a leader. A node keeps an
entry for every node of its own area (shortest path inside the area) and a
single entry per foreign area (shortest path toward that area's leader).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError
from .kernels import backend
from .schemes import SchemeArtifacts, _explicit, _require_connected, default_s, route


@dataclass(frozen=True)
class Partition:
    cluster_of: np.ndarray
    leader_of: np.ndarray

    @property
    def cluster_count(self) -> int:
        return len(self.leader_of)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.cluster_of == c)

    def as_dict(self) -> dict:
        return {
            "cluster_of": self.cluster_of.tolist(),
            "leader_of": self.leader_of.tolist(),
            "cluster_count": self.cluster_count,
        }

    @classmethod
    def from_assignment(cls, g: Graph, cluster_of, leader_of) -> "Partition":
        """Validate an explicit partition: every node in one cluster, leaders
        inside their clusters, every cluster connected."""
        cluster_of = np.asarray(cluster_of, dtype=np.int32)
        leader_of = np.asarray(leader_of, dtype=np.int32)
        k = len(leader_of)
        if len(cluster_of) != g.n or cluster_of.min() < 0 or cluster_of.max() >= k:
            raise ValueError("cluster_of must assign every node to a cluster 0..k-1")
        if (cluster_of[leader_of] != np.arange(k)).any():
            raise ValueError("every leader must belong to its own cluster")
        owner, _, _ = backend.region_tables(g.indptr, g.indices, leader_of, cluster_of)
        reached = np.bincount(owner, minlength=k) + 1
        if (reached != np.bincount(cluster_of, minlength=k)).any():
            raise ValueError("every cluster must be connected")
        return cls(cluster_of, leader_of)


def partition_bfs(g: Graph, k: int | None = None, seed: int = 0) -> Partition:
    """``k`` uniformly sampled seeds grow areas by synchronized BFS; a node
    reached by several seeds at once joins the smallest seed id. Each seed
    leads its area; areas are numbered by ascending seed id."""
    _require_connected(g)
    n = g.n
    if k is None:
        k = default_s(n)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    seeds = np.sort(rng.choice(n, size=k, replace=False)).astype(np.int32)
    return partition_from_seeds(g, seeds)


def partition_from_seeds(g: Graph, seeds) -> Partition:
    seeds = np.unique(np.asarray(seeds, dtype=np.int32))
    nearest, dist = backend.nearest_landmarks(g.indptr, g.indices, seeds)
    if (dist < 0).any():
        raise GraphError("graph is disconnected")
    index = np.full(g.n, -1, dtype=np.int32)
    index[seeds] = np.arange(len(seeds), dtype=np.int32)
    return Partition(index[nearest], seeds)


def build_hier(g: Graph, p: Partition) -> SchemeArtifacts:
    n = g.n
    if len(p.cluster_of) != n:
        raise ValueError("partition does not match the graph")
    nodes = np.arange(n, dtype=np.int32)
    cluster_of = p.cluster_of.astype(np.int32)
    owner, member, port = backend.region_tables(g.indptr, g.indices, nodes, cluster_of)
    ex_ptr, ex_dest, ex_port = _explicit(n, owner, member, port)
    leaders = p.leader_of.astype(np.int32)
    anchor = leaders[cluster_of]
    # rows in cluster-id order so that group index == cluster id
    group_port, _ = backend.landmark_ports(g.indptr, g.indices, leaders, anchor)
    sizes = np.diff(ex_ptr) + (p.cluster_count - 1)
    return SchemeArtifacts(
        kind="hierarchical",
        n=n,
        graph_fingerprint=g.fingerprint(),
        table_sizes=sizes.astype(np.int64),
        ex_ptr=ex_ptr,
        ex_dest=ex_dest,
        ex_port=ex_port,
        groups=leaders,
        group_of=cluster_of,
        anchor=anchor,
        egress=np.full(n, -1, dtype=np.int32),
        group_port=group_port,
        partition=p,
        params={"k": p.cluster_count},
    )


def build_hierarchical(g: Graph, k: int | None = None, seed: int = 0) -> SchemeArtifacts:
    p = partition_bfs(g, k, seed)
    art = build_hier(g, p)
    art.params.update(seed=seed)
    return art


def route_hier(art: SchemeArtifacts, g: Graph, src: int, dst: int) -> list[int]:
    """Inside the destination's area follow the area-internal shortest path,
    elsewhere head for the area's leader."""
    if art.kind != "hierarchical":
        raise ValueError("route_hier needs hierarchical artifacts")
    return route(art, g, src, dst)


__all__ = [
    "Partition",
    "partition_bfs",
    "partition_from_seeds",
    "build_hier",
    "build_hierarchical",
    "route_hier",
]
