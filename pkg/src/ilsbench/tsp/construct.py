from __future__ import annotations

import numpy as np
from numba import njit

from ilsbench.core.solution import Solution
from ilsbench.tsp.localsearch import tour_length


def random_tour(inst, rng: np.random.Generator) -> Solution:
    order = rng.permutation(inst.n).astype(np.int64)
    return Solution(order, tour_length(inst, order))


@njit(cache=True)
def _nearest_neighbor(dist, start):
    n = dist.shape[0]
    visited = np.zeros(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    order[0] = start
    visited[start] = True
    cur = start
    for i in range(1, n):
        best = -1
        best_d = 0
        for c in range(n):
            if not visited[c] and (best < 0 or dist[cur, c] < best_d):
                best = c
                best_d = dist[cur, c]
        order[i] = best
        visited[best] = True
        cur = best
    return order


def nearest_neighbor_tour(inst, start: int = 0) -> Solution:
    """Nearest-neighbour tour from ``start``; ties go to the lower city index."""
    order = _nearest_neighbor(inst.dist, start)
    return Solution(order, tour_length(inst, order))


def greedy_edge_tour(inst) -> Solution:
    """Greedy matching construction over candidate edges.

    Edges are taken shortest first (ties by endpoint indices) when both ends
    still have degree < 2 and no cycle closes early.  Leftover path fragments
    are joined nearest-endpoint first.
    """
    n = inst.n
    if n <= 3:
        order = np.arange(n, dtype=np.int64)
        return Solution(order, tour_length(inst, order))
    nb = inst.neighbors
    i = np.repeat(np.arange(n), nb.shape[1])
    j = nb.ravel().astype(np.int64)
    keep = i < j
    i, j = i[keep], j[keep]
    w = inst.dist[i, j]
    idx = np.lexsort((j, i, w))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    degree = np.zeros(n, dtype=np.int64)
    adj = [[] for _ in range(n)]
    edges = 0
    for e in idx:
        a, b = int(i[e]), int(j[e])
        if degree[a] >= 2 or degree[b] >= 2:
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[ra] = rb
        degree[a] += 1
        degree[b] += 1
        adj[a].append(b)
        adj[b].append(a)
        edges += 1
        if edges == n - 1:
            break

    # join fragments: walk from an endpoint, hop to the nearest free endpoint
    visited = np.zeros(n, dtype=bool)
    ends = [c for c in range(n) if degree[c] < 2]
    order = []
    cur = ends[0] if ends else 0
    while True:
        # walk this fragment
        prev = -1
        while True:
            order.append(cur)
            visited[cur] = True
            nxt = [x for x in adj[cur] if x != prev and not visited[x]]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        if len(order) == n:
            break
        free = [c for c in ends if not visited[c]]
        row = inst.dist[cur, free]
        cur = free[int(np.argmin(row))]
    order = np.asarray(order, dtype=np.int64)
    return Solution(order, tour_length(inst, order))


def randomized_nearest_neighbor(inst, rng: np.random.Generator) -> Solution:
    """Nearest-neighbour tour from a random start city (greedy restart source)."""
    return nearest_neighbor_tour(inst, int(rng.integers(inst.n)))
