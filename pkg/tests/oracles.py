"""Independent reference implementations used to check the library.

Nothing here imports library internals beyond the public Graph accessors:
distances come from Floyd-Warshall on an adjacency matrix, ports from the
sorted neighbour list, and routing replays the documented decision rule over
materialized per-node dictionaries.
"""
from __future__ import annotations

import itertools
import math
import random

INF = math.inf


def edge_list(g):
    return [(int(u), int(v)) for u, v in g.edges()]


def floyd(n, edges):
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for u, v in edges:
        d[u][v] = d[v][u] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def sorted_adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return [sorted(a) for a in adj]


def shortest_port(adj, d, w, t):
    """Port at w of the smallest-id neighbour one hop closer to t."""
    for p, x in enumerate(adj[w]):
        if d[x][t] == d[w][t] - 1:
            return p
    raise AssertionError("no descending neighbour")


def landmark_oracle(n, edges, landmarks):
    """Tables and labels of the landmark scheme, built from the definitions."""
    d = floyd(n, edges)
    adj = sorted_adjacency(n, edges)
    A = sorted(landmarks)
    near = [min(A, key=lambda a: (d[v][a], a)) for v in range(n)]
    tables = []
    for w in range(n):
        t = {a: shortest_port(adj, d, w, a) for a in A if a != w}
        for v in range(n):
            if v != w and d[w][v] < d[v][near[v]]:
                t[v] = shortest_port(adj, d, w, v)
        tables.append(t)
    labels = [(v, near[v], -1 if near[v] == v else shortest_port(adj, d, near[v], v))
              for v in range(n)]
    return tables, labels, near, d


def brute_route(adj, tables, labels, src, dst, limit=None):
    """Replay: deliver / table hit / egress at the landmark / toward the landmark."""
    limit = limit or 2 * len(adj)
    node, lm, egress = labels[dst][:3]
    path = [src]
    cur = src
    while cur != node:
        if node in tables[cur]:
            p = tables[cur][node]
        elif cur == lm:
            p = egress
        else:
            p = tables[cur][lm]
        cur = adj[cur][p]
        path.append(cur)
        if len(path) > limit:
            raise AssertionError(f"loop routing {src}->{dst}: {path}")
    return path


def materialize(art):
    tables = [dict(art.table(w).entries) for w in range(art.n)]
    labels = [(lab.node, lab.landmark, lab.landmark_egress) for lab in art.labels]
    return tables, labels


def brute_stretch(g, art):
    """All ordered pairs routed by the replay router: (ratios, adjacent hops)."""
    n = g.n
    edges = edge_list(g)
    d = floyd(n, edges)
    adj = sorted_adjacency(n, edges)
    tables, labels = materialize(art)
    ratios, hops = [], {}
    for u, v in itertools.permutations(range(n), 2):
        h = len(brute_route(adj, tables, labels, u, v)) - 1
        hops[u, v] = h
        ratios.append(h / d[u][v])
    adjacent = [hops[u, v] for u in range(n) for v in adj[u]]
    return ratios, adjacent, d


def clustering_oracle(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    cs = []
    for v in range(n):
        k = len(adj[v])
        if k < 2:
            cs.append(0.0)
            continue
        links = sum(1 for a, b in itertools.combinations(adj[v], 2) if b in adj[a])
        cs.append(2 * links / (k * (k - 1)))
    return sum(cs) / n


# ------------------------------------------------------------------ corpus

def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def star_edges(n):
    return [(0, i) for i in range(1, n)]


def cycle_edges(n):
    return path_edges(n) + [(n - 1, 0)]


def complete_edges(n):
    return list(itertools.combinations(range(n), 2))


def tree_edges(n, seed):
    rnd = random.Random(seed)
    return [(rnd.randrange(i), i) for i in range(1, n)]


def random_connected_edges(n, extra, seed):
    rnd = random.Random(seed)
    es = set(tuple(sorted(e)) for e in tree_edges(n, seed))
    while len(es) < min(n * (n - 1) // 2, n - 1 + extra):
        u, v = rnd.sample(range(n), 2)
        es.add((min(u, v), max(u, v)))
    return sorted(es)


def small_corpus():
    """(name, edges) for connected graphs with n <= 64."""
    out = []
    for n in (2, 3, 4, 7, 16, 64):
        out.append((f"path{n}", path_edges(n)))
        out.append((f"star{n}", star_edges(n)))
    for n in (3, 5, 12, 64):
        out.append((f"cycle{n}", cycle_edges(n)))
    for n in (2, 4, 9, 20):
        out.append((f"complete{n}", complete_edges(n)))
    for n, seed in ((10, 1), (33, 2), (64, 3)):
        out.append((f"tree{n}_{seed}", tree_edges(n, seed)))
    for n, extra, seed in ((8, 4, 1), (20, 15, 2), (40, 60, 3), (64, 40, 4), (64, 200, 5)):
        out.append((f"random{n}_{extra}_{seed}", random_connected_edges(n, extra, seed)))
    return out


def cowen_oracle(n, edges, alpha):
    """Greedy ball cover: balls of the ceil(n**alpha) nearest nodes (self
    included, (distance, id) order); repeatedly take the node lying in the
    most uncovered balls, smallest id on ties."""
    d = floyd(n, edges)
    size = min(n, math.ceil(n ** alpha - 1e-9))
    balls = [set(sorted(range(n), key=lambda x: (d[v][x], x))[:size]) for v in range(n)]
    uncovered = set(range(n))
    chosen = []
    while uncovered:
        best = min(range(n), key=lambda c: (-sum(c in balls[b] for b in uncovered), c))
        chosen.append(best)
        uncovered = {b for b in uncovered if best not in balls[b]}
    return sorted(chosen)


def hierarchy_oracle(n, edges, cluster_of, leader_of):
    """Own-area entries along area-internal shortest paths, one entry per
    foreign area toward its leader (shortest path in the whole graph)."""
    d = floyd(n, edges)
    adj = sorted_adjacency(n, edges)
    inside = [(u, v) for u, v in edges if cluster_of[u] == cluster_of[v]]
    di = floyd(n, inside)
    tables = []
    for w in range(n):
        t = {}
        for v in range(n):
            if v != w and cluster_of[v] == cluster_of[w]:
                t[v] = next(p for p, x in enumerate(adj[w])
                            if cluster_of[x] == cluster_of[w] and di[x][v] == di[w][v] - 1)
        for c, leader in enumerate(leader_of):
            if c != cluster_of[w]:
                t[leader] = shortest_port(adj, d, w, leader)
        tables.append(t)
    return tables, d
