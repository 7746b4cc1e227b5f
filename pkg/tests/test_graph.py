from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compactroute.graph import (
    GraphError,
    bfs,
    degree_ccdf,
    fit_loglog_slope,
    from_arrays,
    from_edges,
    giant_component,
    stats,
)

from . import oracles
from .strategies import connected_graphs


def test_from_edges_path():
    g = from_edges([(0, 1), (1, 2)])
    assert (g.n, g.m) == (3, 2)


def test_from_edges_duplicate_rejected():
    with pytest.raises(GraphError, match="duplicate"):
        from_edges([(0, 1), (0, 1)])


def test_from_edges_reversed_duplicate_names_line():
    with pytest.raises(GraphError, match="line 3"):
        from_edges([(0, 1), (1, 2), (1, 0)])


def test_from_edges_self_loop():
    with pytest.raises(GraphError, match="self-loop"):
        from_edges([(0, 1), (2, 2)])


def test_from_edges_negative_id():
    with pytest.raises(GraphError):
        from_edges([(0, -1)])


def test_from_edges_reindexes_first_seen():
    g = from_edges([(5, 9), (9, 7)])
    assert (g.n, g.m) == (3, 2)
    assert [g.index_of(x) for x in (5, 9, 7)] == [0, 1, 2]
    assert g.labels.tolist() == [5, 9, 7]


def test_ports_are_sorted_neighbour_indices():
    g = from_edges([(0, 3), (0, 2), (0, 1)])  # dense ids equal labels here
    assert g.adjacency(0) == [(1, 0), (2, 1), (3, 2)]
    assert g.port_to(0, 3) == 2
    assert g.neighbor_at(0, 1) == 2
    with pytest.raises(GraphError):
        g.neighbor_at(0, 3)
    with pytest.raises(GraphError):
        g.port_to(1, 2)


def test_graph_is_immutable(k4):
    with pytest.raises(ValueError):
        k4.indices[0] = 3


def test_bfs_path(p4):
    assert bfs(p4, 0).dist[3] == 3


def test_bfs_star(star5):
    assert bfs(star5, 1).dist[2] == 2


def test_bfs_complete(k4):
    t = bfs(k4, 2)
    assert sorted(t.dist.tolist()) == [0, 1, 1, 1]


def test_bfs_parent_port_smallest_id():
    # 4-cycle 0-1-2-3-0: node 2 has two predecessors toward 0 (1 and 3)
    g = from_edges(oracles.cycle_edges(4))
    t = bfs(g, 0)
    assert g.neighbor_at(2, int(t.parent_port[2])) == 1
    assert t.parent_port[0] == -1


def test_bfs_bad_source(k4):
    with pytest.raises(GraphError):
        bfs(k4, 4)


@pytest.mark.parametrize("name,edges", oracles.small_corpus())
def test_bfs_matches_floyd(name, edges):
    g = from_edges(edges)
    d = oracles.floyd(g.n, oracles.edge_list(g))
    for s in range(g.n):
        t = bfs(g, s)
        assert t.dist.tolist() == d[s]
        for v in range(g.n):
            if v != s:
                u = g.neighbor_at(v, int(t.parent_port[v]))
                assert d[s][u] == d[s][v] - 1


def test_stats_p3_exact(p3):
    st_ = stats(p3)
    assert st_.avg_distance == pytest.approx(4 / 3)
    assert st_.mode == "exact" and st_.pair_count == 3


def test_stats_k4(k4):
    st_ = stats(k4)
    assert st_.avg_distance == 1.0
    assert st_.clustering == 1.0
    assert st_.avg_degree == 3.0


def test_stats_disconnected_points_to_giant_component():
    g = from_edges([(0, 1), (2, 3)])
    with pytest.raises(GraphError, match="giant_component"):
        stats(g)


def test_stats_budget_validated(k4):
    with pytest.raises(ValueError):
        stats(k4, pair_budget=0)


def test_stats_sampled_mode():
    g = from_edges(oracles.random_connected_edges(40, 30, 1))
    st_ = stats(g, pair_budget=100, seed=3)
    assert st_.mode == "sampled" and st_.pair_count == 100 and st_.seed == 3
    assert sum(st_.distance_histogram.values()) == 100
    assert 0 <= st_.pct_2_to_4 <= 1


def test_stats_sampled_deterministic_across_workers():
    g = from_edges(oracles.random_connected_edges(60, 80, 2))
    a = stats(g, pair_budget=500, seed=11, workers=1)
    b = stats(g, pair_budget=500, seed=11, workers=4)
    assert a.as_dict() == b.as_dict()


@pytest.mark.parametrize("name,edges", [c for c in oracles.small_corpus() if len(c[1]) > 1])
def test_stats_exact_matches_oracle(name, edges):
    g = from_edges(edges)
    d = oracles.floyd(g.n, oracles.edge_list(g))
    pairs = [d[i][j] for i in range(g.n) for j in range(i + 1, g.n)]
    st_ = stats(g)
    assert st_.avg_distance == pytest.approx(sum(pairs) / len(pairs), rel=1e-12)
    assert st_.clustering == pytest.approx(oracles.clustering_oracle(g.n, oracles.edge_list(g)), abs=1e-12)
    assert st_.pct_2_to_4 == pytest.approx(sum(2 <= x <= 4 for x in pairs) / len(pairs))


def test_clustering_low_degree_is_zero(p3):
    # only the middle node has degree 2 and its neighbours are not linked
    assert stats(p3).clustering == 0.0


def test_giant_component_tie_break():
    g = from_edges([(3, 4), (4, 5), (5, 3), (0, 1), (1, 2), (2, 0)])
    gc = giant_component(g)
    assert sorted(gc.labels.tolist()) == [0, 1, 2]


def test_giant_component_identity(p4):
    gc = giant_component(p4)
    assert gc.labels.tolist() == p4.labels.tolist()
    assert gc.fingerprint() == p4.fingerprint()


def test_giant_component_drops_small_piece():
    g = from_edges([(0, 1), (1, 2), (2, 3), (10, 11)])
    gc = giant_component(g)
    assert (gc.n, gc.m) == (4, 3)
    assert sorted(gc.labels.tolist()) == [0, 1, 2, 3]


def test_giant_component_empty():
    with pytest.raises(GraphError):
        giant_component(from_arrays(0, np.array([], int), np.array([], int)))


def test_ccdf_star(star5):
    assert dict(degree_ccdf(star5))[4] == pytest.approx(0.2)


def test_ccdf_k4(k4):
    assert dict(degree_ccdf(k4))[3] == 1.0


def test_ccdf_cube():
    # 3-regular on 8 nodes: the 3-cube
    edges = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]
    c = dict(degree_ccdf(from_edges(edges)))
    assert c[3] == 1.0
    assert c.get(4, 0.0) == 0.0


def test_fit_identity():
    assert fit_loglog_slope([(1, 1), (10, 10), (100, 100)]) == pytest.approx(1.0)


def test_fit_two_points():
    assert fit_loglog_slope([(1, 1), (100, 10)]) == pytest.approx(0.5)


def test_fit_derived_example():
    # log10(31.6/3.16) / log10(1000/10) = 1 / 2 exactly
    assert fit_loglog_slope([(10, 3.16), (1000, 31.6)]) == pytest.approx(0.5, abs=1e-2)


@pytest.mark.parametrize("pts", [[(1, 1)], [(1, 1), (0, 2)], [(1, -1), (2, 2)]])
def test_fit_errors(pts):
    with pytest.raises(ValueError):
        fit_loglog_slope(pts)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=24))
def test_bfs_property(edges):
    g = from_edges(edges)
    d = oracles.floyd(g.n, oracles.edge_list(g))
    for s in range(g.n):
        assert bfs(g, s).dist.tolist() == d[s]


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=20), st.randoms(use_true_random=False))
def test_stats_permutation_invariant(edges, rnd):
    g = from_edges(edges)
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = from_edges([(perm[u], perm[v]) for u, v in oracles.edge_list(g)])
    a, b = stats(g), stats(h)
    assert a.avg_distance == b.avg_distance
    assert a.distance_histogram == b.distance_histogram
    assert a.clustering == pytest.approx(b.clustering, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=30))
def test_ccdf_monotone(edges):
    c = [f for _, f in degree_ccdf(from_edges(edges))]
    assert all(0 < f <= 1 for f in c)
    assert all(a >= b for a, b in zip(c, c[1:]))
