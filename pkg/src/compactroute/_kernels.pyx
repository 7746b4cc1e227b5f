# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled hot loops: BFS variants, truncated cluster/ball searches and
packet forwarding. Every function here has a pure-Python twin with the same
signature in ``_pykernels``; results must be identical."""

import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector

cnp.import_array()

ctypedef cnp.int32_t i32

BACKEND = "cython"


cdef int _bfs(const i32[::1] indptr, const i32[::1] indices, int src,
              i32[::1] dist, i32[::1] queue) noexcept nogil:
    # dist must be -1 everywhere on entry; returns number of visited nodes
    cdef int head = 0, tail = 1, u, v, k, du
    dist[src] = 0
    queue[0] = src
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return tail


cdef void _tree(const i32[::1] indptr, const i32[::1] indices, int src,
                i32[::1] dist, i32[::1] queue, int visited,
                i32[::1] parent, i32[::1] first) noexcept nogil:
    # parent: smallest-id neighbour one hop closer to src (as a local port);
    # first: smallest port at src starting some shortest path to the node
    cdef int i, k, u, v, dv, fh
    for k in range(indptr[src], indptr[src + 1]):
        first[indices[k]] = k - indptr[src]
    parent[src] = -1
    first[src] = -1
    for i in range(1, visited):
        v = queue[i]
        dv = dist[v] - 1
        parent[v] = -1
        fh = 2147483647
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if dist[u] == dv:
                if parent[v] < 0:
                    parent[v] = k - indptr[v]
                if dv > 0 and first[u] < fh:
                    fh = first[u]
        if dv > 0:
            first[v] = fh


def bfs_tree(const i32[::1] indptr, const i32[::1] indices, int src):
    cdef int n = indptr.shape[0] - 1
    dist_a = np.full(n, -1, dtype=np.int32)
    parent_a = np.full(n, -1, dtype=np.int32)
    first_a = np.full(n, -1, dtype=np.int32)
    queue_a = np.empty(n, dtype=np.int32)
    cdef i32[::1] dist = dist_a, parent = parent_a, first = first_a, queue = queue_a
    cdef int visited
    with nogil:
        visited = _bfs(indptr, indices, src, dist, queue)
        _tree(indptr, indices, src, dist, queue, visited, parent, first)
    return dist_a, parent_a, first_a


def distances_to(const i32[::1] indptr, const i32[::1] indices,
                 const i32[::1] targets, const cnp.int64_t[::1] ptr,
                 const i32[::1] others):
    """For each target t_i, distance to every node in others[ptr[i]:ptr[i+1]]."""
    cdef int n = indptr.shape[0] - 1
    cdef Py_ssize_t i, j, nt = targets.shape[0]
    out_a = np.empty(others.shape[0], dtype=np.int32)
    dist_a = np.full(n, -1, dtype=np.int32)
    queue_a = np.empty(n, dtype=np.int32)
    cdef i32[::1] out = out_a, dist = dist_a, queue = queue_a
    cdef int visited, k
    with nogil:
        for i in range(nt):
            visited = _bfs(indptr, indices, targets[i], dist, queue)
            for j in range(ptr[i], ptr[i + 1]):
                out[j] = dist[others[j]]
            for k in range(visited):
                dist[queue[k]] = -1
    return out_a


def trivial_routes(const i32[::1] indptr, const i32[::1] indices,
                   const i32[::1] targets, const cnp.int64_t[::1] ptr,
                   const i32[::1] srcs, int max_hops):
    """Forward along destination-rooted BFS ports (the trivial scheme's table
    column for that destination). Returns (routed hops, shortest distance);
    hops is -1 when the loop guard trips."""
    cdef int n = indptr.shape[0] - 1
    cdef Py_ssize_t i, j, nt = targets.shape[0]
    hops_a = np.empty(srcs.shape[0], dtype=np.int32)
    dout_a = np.empty(srcs.shape[0], dtype=np.int32)
    dist_a = np.full(n, -1, dtype=np.int32)
    queue_a = np.empty(n, dtype=np.int32)
    parent_a = np.full(n, -1, dtype=np.int32)
    first_a = np.full(n, -1, dtype=np.int32)
    cdef i32[::1] hops = hops_a, dout = dout_a, dist = dist_a, queue = queue_a
    cdef i32[::1] parent = parent_a, first = first_a
    cdef int visited, k, cur, dst, h
    with nogil:
        for i in range(nt):
            dst = targets[i]
            visited = _bfs(indptr, indices, dst, dist, queue)
            _tree(indptr, indices, dst, dist, queue, visited, parent, first)
            for j in range(ptr[i], ptr[i + 1]):
                cur = srcs[j]
                h = 0
                if dist[cur] < 0:
                    h = -1
                while h >= 0 and cur != dst:
                    if h >= max_hops or parent[cur] < 0:
                        h = -1
                        break
                    cur = indices[indptr[cur] + parent[cur]]
                    h += 1
                hops[j] = h
                dout[j] = dist[srcs[j]]
            for k in range(visited):
                dist[queue[k]] = -1
    return hops_a, dout_a


def nearest_landmarks(const i32[::1] indptr, const i32[::1] indices,
                      const i32[::1] landmarks):
    """Multi-source BFS; equal-distance ties go to the smallest landmark id."""
    cdef int n = indptr.shape[0] - 1
    nearest_a = np.full(n, -1, dtype=np.int32)
    dist_a = np.full(n, -1, dtype=np.int32)
    queue_a = np.empty(n, dtype=np.int32)
    cdef i32[::1] nearest = nearest_a, dist = dist_a, queue = queue_a
    cdef int head = 0, tail = 0, u, v, k, du
    cdef Py_ssize_t i
    with nogil:
        for i in range(landmarks.shape[0]):
            v = landmarks[i]
            if dist[v] < 0:
                dist[v] = 0
                nearest[v] = v
                queue[tail] = v
                tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[v] < 0:
                    dist[v] = du
                    nearest[v] = nearest[u]
                    queue[tail] = v
                    tail += 1
                elif dist[v] == du and nearest[u] < nearest[v]:
                    nearest[v] = nearest[u]
    return nearest_a, dist_a


cdef int _cluster(const i32[::1] indptr, const i32[::1] indices, int w,
                  const i32[::1] bound, int limit, int stamp,
                  i32[::1] mark, i32[::1] accepted, i32[::1] dist,
                  i32[::1] first, i32[::1] queue) noexcept nogil:
    # Truncated BFS over {v : d(w, v) < bound[v]}; nodes failing the test on
    # first discovery can never pass later. Stops once more than `limit`
    # members were found (limit < 0: no limit). Returns queue length.
    cdef int head = 0, tail = 1, u, v, k, d, count = 0
    mark[w] = stamp
    accepted[w] = stamp
    dist[w] = 0
    first[w] = -1
    queue[0] = w
    while head < tail:
        u = queue[head]
        head += 1
        d = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if mark[v] != stamp:
                mark[v] = stamp
                if d < bound[v]:
                    accepted[v] = stamp
                    dist[v] = d
                    first[v] = k - indptr[w] if u == w else first[u]
                    queue[tail] = v
                    tail += 1
                    count += 1
                    if limit >= 0 and count > limit:
                        return tail
            elif accepted[v] == stamp and dist[v] == d and u != w and first[u] < first[v]:
                first[v] = first[u]
    return tail


def cluster_sizes(const i32[::1] indptr, const i32[::1] indices,
                  const i32[::1] nodes, const i32[::1] bound, int limit):
    cdef int n = indptr.shape[0] - 1
    out_a = np.empty(nodes.shape[0], dtype=np.int32)
    mark_a = np.zeros(n, dtype=np.int32)
    acc_a = np.zeros(n, dtype=np.int32)
    work = [np.empty(n, dtype=np.int32) for _ in range(3)]
    cdef i32[::1] out = out_a, mark = mark_a, acc = acc_a
    cdef i32[::1] dist = work[0], first = work[1], queue = work[2]
    cdef Py_ssize_t i
    with nogil:
        for i in range(nodes.shape[0]):
            out[i] = _cluster(indptr, indices, nodes[i], bound, limit, <int>i + 1,
                              mark, acc, dist, first, queue) - 1
    return out_a


def clusters(const i32[::1] indptr, const i32[::1] indices,
             const i32[::1] nodes, const i32[::1] bound):
    """Members and first-hop ports of each node's cluster, as flat arrays
    (owner index, member, port) in discovery order."""
    cdef int n = indptr.shape[0] - 1
    mark_a = np.zeros(n, dtype=np.int32)
    acc_a = np.zeros(n, dtype=np.int32)
    work = [np.empty(n, dtype=np.int32) for _ in range(3)]
    cdef i32[::1] mark = mark_a, acc = acc_a
    cdef i32[::1] dist = work[0], first = work[1], queue = work[2]
    cdef vector[i32] owner, member, port
    cdef Py_ssize_t i
    cdef int tail, j
    with nogil:
        for i in range(nodes.shape[0]):
            tail = _cluster(indptr, indices, nodes[i], bound, -1, <int>i + 1,
                            mark, acc, dist, first, queue)
            for j in range(1, tail):
                owner.push_back(<i32>i)
                member.push_back(queue[j])
                port.push_back(first[queue[j]])
    return _as_array(owner), _as_array(member), _as_array(port)


def region_tables(const i32[::1] indptr, const i32[::1] indices,
                  const i32[::1] nodes, const i32[::1] region):
    """Shortest-path first-hop ports from each node to every node of its own
    region, with paths confined to the region."""
    cdef int n = indptr.shape[0] - 1
    mark_a = np.zeros(n, dtype=np.int32)
    work = [np.empty(n, dtype=np.int32) for _ in range(3)]
    cdef i32[::1] mark = mark_a
    cdef i32[::1] dist = work[0], first = work[1], queue = work[2]
    cdef vector[i32] owner, member, port
    cdef Py_ssize_t i
    cdef int w, r, head, tail, u, v, k, d, stamp, j
    with nogil:
        for i in range(nodes.shape[0]):
            w = nodes[i]
            r = region[w]
            stamp = <int>i + 1
            mark[w] = stamp
            dist[w] = 0
            queue[0] = w
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                d = dist[u] + 1
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if region[v] != r:
                        continue
                    if mark[v] != stamp:
                        mark[v] = stamp
                        dist[v] = d
                        first[v] = k - indptr[w] if u == w else first[u]
                        queue[tail] = v
                        tail += 1
                    elif dist[v] == d and u != w and first[u] < first[v]:
                        first[v] = first[u]
            for j in range(1, tail):
                owner.push_back(<i32>i)
                member.push_back(queue[j])
                port.push_back(first[queue[j]])
    return _as_array(owner), _as_array(member), _as_array(port)


def balls(const i32[::1] indptr, const i32[::1] indices, int size):
    """Row w holds the `size` nodes nearest to w (w first), ordered by
    (distance, id)."""
    cdef int n = indptr.shape[0] - 1
    out_a = np.empty((n, size), dtype=np.int32)
    mark_a = np.zeros(n, dtype=np.int32)
    cur_a = np.empty(n, dtype=np.int32)
    nxt_a = np.empty(n, dtype=np.int32)
    cdef i32[:, ::1] out = out_a
    cdef i32[::1] mark = mark_a, cur = cur_a, nxt = nxt_a
    cdef int w, filled, ncur, nnxt, i, k, u, v, take
    for w in range(n):
        mark[w] = w + 1
        out[w, 0] = w
        filled = 1
        cur[0] = w
        ncur = 1
        while filled < size and ncur > 0:
            nnxt = 0
            for i in range(ncur):
                u = cur[i]
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if mark[v] != w + 1:
                        mark[v] = w + 1
                        nxt[nnxt] = v
                        nnxt += 1
            nxt_a[:nnxt].sort()
            take = nnxt if filled + nnxt <= size else size - filled
            for i in range(take):
                out[w, filled + i] = nxt[i]
            filled += take
            for i in range(nnxt):
                cur[i] = nxt[i]
            ncur = nnxt
        if filled < size:
            raise ValueError("graph is disconnected")
    return out_a


def landmark_ports(const i32[::1] indptr, const i32[::1] indices,
                   const i32[::1] landmarks, const i32[::1] anchor):
    """Row g: every node's port toward landmarks[g]. Also the egress port at
    anchor[v] toward v for every node anchored at one of the landmarks."""
    cdef int n = indptr.shape[0] - 1
    cdef Py_ssize_t g, G = landmarks.shape[0]
    ports_a = np.full((G, n), -1, dtype=np.int32)
    egress_a = np.full(n, -1, dtype=np.int32)
    dist_a = np.full(n, -1, dtype=np.int32)
    queue_a = np.empty(n, dtype=np.int32)
    first_a = np.full(n, -1, dtype=np.int32)
    cdef i32[:, ::1] ports = ports_a
    cdef i32[::1] egress = egress_a, dist = dist_a, queue = queue_a, first = first_a
    cdef int visited, k, a, v
    with nogil:
        for g in range(G):
            a = landmarks[g]
            visited = _bfs(indptr, indices, a, dist, queue)
            _tree(indptr, indices, a, dist, queue, visited, ports[g], first)
            for k in range(visited):
                v = queue[k]
                if anchor[v] == a:
                    egress[v] = first[v]
                dist[v] = -1
    return ports_a, egress_a


def route_lengths(const i32[::1] indptr, const i32[::1] indices,
                  const cnp.int64_t[::1] ex_ptr, const i32[::1] ex_dest,
                  const i32[::1] ex_port, const i32[::1] group_of,
                  const i32[::1] anchor, const i32[::1] egress,
                  const i32[:, ::1] group_port,
                  const i32[::1] srcs, const i32[::1] dsts, int max_hops):
    """Hop counts of routed paths; -1 when the loop guard trips, -2 when a
    table lookup finds no usable port."""
    cdef Py_ssize_t p, npairs = srcs.shape[0]
    out_a = np.empty(npairs, dtype=np.int32)
    cdef i32[::1] out = out_a
    cdef int cur, dst, h, port
    cdef cnp.int64_t lo, hi, mid
    with nogil:
        for p in range(npairs):
            cur = srcs[p]
            dst = dsts[p]
            h = 0
            while cur != dst:
                if h >= max_hops:
                    h = -1
                    break
                port = -1
                lo = ex_ptr[cur]
                hi = ex_ptr[cur + 1]
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if ex_dest[mid] < dst:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo < ex_ptr[cur + 1] and ex_dest[lo] == dst:
                    port = ex_port[lo]
                elif cur == anchor[dst]:
                    port = egress[dst]
                elif group_of[dst] >= 0:
                    port = group_port[group_of[dst], cur]
                if port < 0 or port >= indptr[cur + 1] - indptr[cur]:
                    h = -2
                    break
                cur = indices[indptr[cur] + port]
                h += 1
            out[p] = h
    return out_a


cdef object _as_array(vector[i32]& vec):
    out_a = np.empty(vec.size(), dtype=np.int32)
    cdef i32[::1] out = out_a
    cdef size_t i
    for i in range(vec.size()):
        out[i] = vec[i]
    return out_a
