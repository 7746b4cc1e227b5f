from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compactroute.graph import from_edges
from compactroute.hierarchical import (
    Partition,
    build_hier,
    build_hierarchical,
    partition_bfs,
    partition_from_seeds,
    route_hier,
)
from compactroute.schemes import artifacts_to_json, build_trivial, build_tz, route

from . import oracles
from .strategies import connected_graphs


def test_p4_two_seeds(p4):
    p = partition_from_seeds(p4, [0, 3])
    assert p.cluster_of.tolist() == [0, 0, 1, 1]
    assert p.leader_of.tolist() == [0, 3]


def test_simultaneous_arrival_goes_to_smaller_seed():
    # P3 a-b-c with seeds a and c: b is reached by both in round one
    g = from_edges(oracles.path_edges(3))
    assert partition_from_seeds(g, [2, 0]).cluster_of.tolist() == [0, 0, 1]


def test_k1_whole_graph():
    g = from_edges(oracles.random_connected_edges(20, 10, 1))
    p = partition_bfs(g, k=1, seed=5)
    assert p.cluster_count == 1
    assert (p.cluster_of == 0).all()


def test_kn_singletons():
    g = from_edges(oracles.random_connected_edges(15, 10, 2))
    p = partition_bfs(g, k=g.n, seed=0)
    assert p.leader_of.tolist() == list(range(g.n))
    assert p.cluster_of.tolist() == list(range(g.n))


def test_invalid_k(p4):
    for k in (0, 5):
        with pytest.raises(ValueError):
            partition_bfs(p4, k=k)


def test_default_k():
    g = from_edges(oracles.random_connected_edges(50, 20, 3))
    assert partition_bfs(g, seed=1).cluster_count == 8


def test_build_hier_p4_table(p4):
    art = build_hier(p4, Partition.from_assignment(p4, [0, 0, 1, 1], [0, 2]))
    assert art.table(1).entries == {0: p4.port_to(1, 0), 2: p4.port_to(1, 2)}
    lab = art.label(3)
    assert (lab.node, lab.cluster, lab.landmark) == (3, 1, 2)


def test_k4_route_stretch_two(k4):
    p = Partition.from_assignment(k4, [0, 0, 1, 1], [0, 2])
    art = build_hier(k4, p)
    assert route_hier(art, k4, 1, 3) == [1, 2, 3]


def test_route_hier_rejects_other_kinds(k4):
    with pytest.raises(ValueError):
        route_hier(build_trivial(k4), k4, 0, 1)


@pytest.mark.parametrize("cluster_of,leader_of", [
    ([0, 0, 1], [0, 2]),          # wrong length
    ([0, 0, 1, 1], [0, 0]),       # leader outside its cluster
    ([0, 1, 1, 0], [0, 1]),       # cluster {0, 3} is disconnected on P4
])
def test_from_assignment_validates(p4, cluster_of, leader_of):
    with pytest.raises(ValueError):
        Partition.from_assignment(p4, cluster_of, leader_of)


@pytest.mark.parametrize("k", [1, "n"])
def test_degenerate_hierarchies_match_trivial(k):
    g = from_edges(oracles.random_connected_edges(25, 30, 4))
    kk = g.n if k == "n" else k
    art = build_hierarchical(g, k=kk, seed=2)
    triv = build_trivial(g)
    assert art.table_sizes.tolist() == [g.n - 1] * g.n
    for u in range(g.n):
        for v in range(g.n):
            if u != v:
                assert len(route_hier(art, g, u, v)) == len(route(triv, g, u, v))


@pytest.mark.parametrize("name,edges", oracles.small_corpus())
def test_tables_match_oracle(name, edges):
    g = from_edges(edges)
    p = partition_bfs(g, seed=7)
    art = build_hier(g, p)
    tables, d = oracles.hierarchy_oracle(g.n, oracles.edge_list(g), p.cluster_of.tolist(),
                                         p.leader_of.tolist())
    for w in range(g.n):
        assert art.table(w).entries == tables[w]
        own = int((p.cluster_of == p.cluster_of[w]).sum())
        assert art.table_sizes[w] == own - 1 + p.cluster_count - 1


@settings(max_examples=50, deadline=None)
@given(connected_graphs(max_n=24), st.integers(0, 1000), st.integers(1, 24))
def test_routes_terminate_and_intra_is_shortest_in_area(edges, seed, k):
    g = from_edges(edges)
    p = partition_bfs(g, k=min(k, g.n), seed=seed)
    art = build_hier(g, p)
    cl = p.cluster_of.tolist()
    inside = [(u, v) for u, v in oracles.edge_list(g) if cl[u] == cl[v]]
    di = oracles.floyd(g.n, inside)
    for u in range(g.n):
        for v in range(g.n):
            if u == v:
                continue
            path = route_hier(art, g, u, v)
            assert path[-1] == v and len(path) < 2 * g.n
            if cl[u] == cl[v]:
                assert len(path) - 1 == di[u][v]


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 40), st.integers(0, 1000))
def test_intra_area_stretch_one_on_trees(n, seed):
    g = from_edges(oracles.tree_edges(n, seed))
    p = partition_bfs(g, seed=seed)
    art = build_hier(g, p)
    d = oracles.floyd(g.n, oracles.edge_list(g))
    for u in range(g.n):
        for v in range(g.n):
            if u != v and p.cluster_of[u] == p.cluster_of[v]:
                assert len(route_hier(art, g, u, v)) - 1 == d[u][v]


def test_partition_serializes(p4):
    art = build_hierarchical(p4, k=2, seed=0)
    doc = artifacts_to_json(art)
    assert doc["partition"]["cluster_count"] == 2
    assert len(doc["labels"]) == 4


def test_hierarchy_stretches_more_than_tz():
    from compactroute.evaluation import measure_stretch
    from compactroute.topology import GenConfig, gen_preferential

    g = gen_preferential(GenConfig(n=2_000, m_attach=2, seed=3))
    h = measure_stretch(build_hierarchical(g, seed=1), g, 20_000, 1)
    t = measure_stretch(build_tz(g, seed=1), g, 20_000, 1)
    assert h.avg_stretch > t.avg_stretch
    assert np.isfinite(h.max_stretch)
