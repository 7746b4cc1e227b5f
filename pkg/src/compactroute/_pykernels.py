"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Same signatures, same outputs. Used when the extension is not built or when
``COMPACTROUTE_PURE=1`` is set.
"""
from __future__ import annotations

from collections import deque

import numpy as np

BACKEND = "python"


def _adj(indptr, indices):
    ip = indptr.tolist()
    ix = indices.tolist()
    return [ix[ip[u]:ip[u + 1]] for u in range(len(ip) - 1)]


def _bfs(adj, src):
    dist = {src: 0}
    order = [src]
    q = deque(order)
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if v not in dist:
                dist[v] = du
                order.append(v)
                q.append(v)
    return dist, order


def _tree(adj, src, dist, order):
    parent = {src: -1}
    first = {v: p for p, v in enumerate(adj[src])}
    first[src] = -1
    for v in order[1:]:
        dv = dist[v] - 1
        par = -1
        fh = None
        for p, u in enumerate(adj[v]):
            if dist.get(u, -1) == dv:
                if par < 0:
                    par = p
                if dv > 0 and (fh is None or first[u] < fh):
                    fh = first[u]
        parent[v] = par
        if dv > 0:
            first[v] = fh
    return parent, first


def bfs_tree(indptr, indices, src):
    n = len(indptr) - 1
    adj = _adj(indptr, indices)
    dist, order = _bfs(adj, src)
    parent, first = _tree(adj, src, dist, order)
    d = np.full(n, -1, dtype=np.int32)
    pa = np.full(n, -1, dtype=np.int32)
    fi = np.full(n, -1, dtype=np.int32)
    for v in order:
        d[v] = dist[v]
        pa[v] = parent[v]
        fi[v] = first[v]
    return d, pa, fi


def distances_to(indptr, indices, targets, ptr, others):
    adj = _adj(indptr, indices)
    out = np.empty(len(others), dtype=np.int32)
    oth = others.tolist()
    for i, t in enumerate(targets.tolist()):
        dist, _ = _bfs(adj, t)
        for j in range(int(ptr[i]), int(ptr[i + 1])):
            out[j] = dist.get(oth[j], -1)
    return out


def trivial_routes(indptr, indices, targets, ptr, srcs, max_hops):
    adj = _adj(indptr, indices)
    hops = np.empty(len(srcs), dtype=np.int32)
    dout = np.empty(len(srcs), dtype=np.int32)
    sl = srcs.tolist()
    for i, dst in enumerate(targets.tolist()):
        dist, order = _bfs(adj, dst)
        parent, _ = _tree(adj, dst, dist, order)
        for j in range(int(ptr[i]), int(ptr[i + 1])):
            cur = sl[j]
            h = 0 if cur in dist else -1
            while h >= 0 and cur != dst:
                if h >= max_hops or parent[cur] < 0:
                    h = -1
                    break
                cur = adj[cur][parent[cur]]
                h += 1
            hops[j] = h
            dout[j] = dist.get(sl[j], -1)
    return hops, dout


def nearest_landmarks(indptr, indices, landmarks):
    n = len(indptr) - 1
    adj = _adj(indptr, indices)
    nearest = [-1] * n
    dist = [-1] * n
    q = deque()
    for v in landmarks.tolist():
        if dist[v] < 0:
            dist[v] = 0
            nearest[v] = v
            q.append(v)
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du
                nearest[v] = nearest[u]
                q.append(v)
            elif dist[v] == du and nearest[u] < nearest[v]:
                nearest[v] = nearest[u]
    return np.array(nearest, dtype=np.int32), np.array(dist, dtype=np.int32)


def _cluster(adj, w, bound, limit):
    # members in discovery order with their first-hop ports at w
    seen = {w}
    dist = {w: 0}
    first = {w: -1}
    order = [w]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        d = dist[u] + 1
        for p, v in enumerate(adj[u]):
            if v not in seen:
                seen.add(v)
                if d < bound[v]:
                    dist[v] = d
                    first[v] = p if u == w else first[u]
                    order.append(v)
                    if 0 <= limit < len(order) - 1:
                        return order, first
            elif dist.get(v) == d and u != w and first[u] < first[v]:
                first[v] = first[u]
    return order, first


def cluster_sizes(indptr, indices, nodes, bound, limit):
    adj = _adj(indptr, indices)
    b = bound.tolist()
    return np.array([len(_cluster(adj, w, b, limit)[0]) - 1 for w in nodes.tolist()],
                    dtype=np.int32)


def _flat(rows):
    owner, member, port = [], [], []
    for i, (order, first) in enumerate(rows):
        for v in order[1:]:
            owner.append(i)
            member.append(v)
            port.append(first[v])
    return (np.array(owner, dtype=np.int32), np.array(member, dtype=np.int32),
            np.array(port, dtype=np.int32))


def clusters(indptr, indices, nodes, bound):
    adj = _adj(indptr, indices)
    b = bound.tolist()
    return _flat(_cluster(adj, w, b, -1) for w in nodes.tolist())


def region_tables(indptr, indices, nodes, region):
    adj = _adj(indptr, indices)
    reg = region.tolist()
    rows = []
    for w in nodes.tolist():
        r = reg[w]
        dist = {w: 0}
        first = {w: -1}
        order = [w]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            d = dist[u] + 1
            for p, v in enumerate(adj[u]):
                if reg[v] != r:
                    continue
                if v not in dist:
                    dist[v] = d
                    first[v] = p if u == w else first[u]
                    order.append(v)
                elif dist[v] == d and u != w and first[u] < first[v]:
                    first[v] = first[u]
        rows.append((order, first))
    return _flat(rows)


def balls(indptr, indices, size):
    n = len(indptr) - 1
    adj = _adj(indptr, indices)
    out = np.empty((n, size), dtype=np.int32)
    for w in range(n):
        ball = [w]
        seen = {w}
        level = [w]
        while len(ball) < size and level:
            nxt = []
            for u in level:
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            nxt.sort()
            ball.extend(nxt[:size - len(ball)])
            level = nxt
        if len(ball) < size:
            raise ValueError("graph is disconnected")
        out[w] = ball
    return out


def landmark_ports(indptr, indices, landmarks, anchor):
    n = len(indptr) - 1
    adj = _adj(indptr, indices)
    anc = anchor.tolist()
    ports = np.full((len(landmarks), n), -1, dtype=np.int32)
    egress = np.full(n, -1, dtype=np.int32)
    for g, a in enumerate(landmarks.tolist()):
        dist, order = _bfs(adj, a)
        parent, first = _tree(adj, a, dist, order)
        row = ports[g]
        for v in order:
            row[v] = parent[v]
            if anc[v] == a:
                egress[v] = first[v]
    return ports, egress


def route_lengths(indptr, indices, ex_ptr, ex_dest, ex_port, group_of, anchor,
                  egress, group_port, srcs, dsts, max_hops):
    adj = _adj(indptr, indices)
    ep = ex_ptr.tolist()
    tables = [dict(zip(ex_dest[ep[u]:ep[u + 1]].tolist(), ex_port[ep[u]:ep[u + 1]].tolist()))
              for u in range(len(ep) - 1)]
    grp = group_of.tolist()
    anc = anchor.tolist()
    egr = egress.tolist()
    out = np.empty(len(srcs), dtype=np.int32)
    for p, (cur, dst) in enumerate(zip(srcs.tolist(), dsts.tolist())):
        h = 0
        while cur != dst:
            if h >= max_hops:
                h = -1
                break
            port = tables[cur].get(dst)
            if port is None:
                if cur == anc[dst]:
                    port = egr[dst]
                elif grp[dst] >= 0:
                    port = int(group_port[grp[dst], cur])
                else:
                    port = -1
            if not 0 <= port < len(adj[cur]):
                h = -2
                break
            cur = adj[cur][port]
            h += 1
        out[p] = h
    return out
