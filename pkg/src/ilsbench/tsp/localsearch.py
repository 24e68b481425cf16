"""Neighbour-list 2-opt and 3-opt descent with don't-look bits.

Tours are arrays ``order`` (city at each position) with the inverse
``pos``.  Every move is applied as a sequence of orientation-free 2-opt edge
exchanges, so the physical direction of the array never matters.

The search from a base city ``t1`` follows the usual sequential scheme:
remove (t1, t2), add (t2, t3) with t3 from t2's candidate list and a positive
partial gain, remove (t3, t4), and either close up (2-opt) or add (t4, t5)
from t4's candidate list, remove (t5, t6) and close (t6, t1).  All four pure
3-opt reconnections reachable that way are tried.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ilsbench.core.solution import Solution


@njit(cache=True)
def _reverse(order, pos, i, j):
    """Reverse the cyclic position range i..j, or its complement if shorter."""
    n = order.shape[0]
    length = (j - i) % n + 1
    if 2 * length > n:
        i, j = (j + 1) % n, (i - 1) % n
        length = n - length
    for _ in range(length // 2):
        x = order[i]
        y = order[j]
        order[i] = y
        pos[y] = i
        order[j] = x
        pos[x] = j
        i = (i + 1) % n
        j = (j - 1) % n


@njit(cache=True)
def _move(order, pos, a, b, c, d):
    """Remove edges (a, b), (c, d); add (a, c), (b, d).

    Requires b, d to follow a, c in the same traversal direction.
    """
    n = order.shape[0]
    if order[(pos[a] + 1) % n] == b:
        _reverse(order, pos, pos[b], pos[c])
    else:
        _reverse(order, pos, pos[a], pos[d])


@njit(cache=True)
def _try_base(order, pos, dist, neigh, t1, depth, out):
    """First improving move from base city t1; endpoints go to ``out``.

    Returns the gain (0 if none); ``out[0]`` holds the number of endpoints.
    """
    n = order.shape[0]
    k = neigh.shape[1]
    p1 = pos[t1]
    for dirn in (1, -1):
        t2 = order[(p1 + dirn) % n]
        d12 = dist[t1, t2]
        for i3 in range(k):
            t3 = neigh[t2, i3]
            g1 = d12 - dist[t2, t3]
            if g1 <= 0:
                break
            r3 = ((pos[t3] - p1) * dirn) % n
            if r3 == 0:
                continue
            # t4 before t3 in this direction: 2-opt, and 3-opt types "a D B' f" / "a D' B f"
            if r3 >= 3:
                t4 = order[(pos[t3] - dirn) % n]
                g2 = g1 + dist[t3, t4]
                gain = g2 - dist[t4, t1]
                if gain > 0:
                    _move(order, pos, t1, t2, t4, t3)
                    out[0] = 4
                    out[1] = t1
                    out[2] = t2
                    out[3] = t3
                    out[4] = t4
                    return gain
                if depth >= 3:
                    r4 = r3 - 1
                    for i5 in range(k):
                        t5 = neigh[t4, i5]
                        g3 = g2 - dist[t4, t5]
                        if g3 <= 0:
                            break
                        r5 = ((pos[t5] - p1) * dirn) % n
                        if r5 == 0:
                            continue
                        if r5 <= r4 - 2:
                            # a=t1 b=t2 c=t5 d=t6 e=t4 f=t3 -> a D B' f
                            t6 = order[(pos[t5] + dirn) % n]
                            gain = g3 + dist[t5, t6] - dist[t6, t1]
                            if gain > 0:
                                _move(order, pos, t1, t2, t4, t3)
                                _move(order, pos, t1, t4, t6, t5)
                                out[0] = 6
                                out[1] = t1
                                out[2] = t2
                                out[3] = t3
                                out[4] = t4
                                out[5] = t5
                                out[6] = t6
                                return gain
                        elif r5 > r3:
                            # a=t1 b=t2 c=t4 d=t3 e=t6 f=t5 -> a D' B f
                            t6 = order[(pos[t5] - dirn) % n]
                            gain = g3 + dist[t5, t6] - dist[t6, t1]
                            if gain > 0:
                                _move(order, pos, t1, t2, t6, t5)
                                _move(order, pos, t3, t4, t2, t5)
                                out[0] = 6
                                out[1] = t1
                                out[2] = t2
                                out[3] = t3
                                out[4] = t4
                                out[5] = t5
                                out[6] = t6
                                return gain
            # t4 after t3: 3-opt types "a D B f" and "a B' D' f"
            if depth >= 3 and 2 <= r3 <= n - 2:
                t4 = order[(pos[t3] + dirn) % n]
                g2 = g1 + dist[t3, t4]
                for i5 in range(k):
                    t5 = neigh[t4, i5]
                    g3 = g2 - dist[t4, t5]
                    if g3 <= 0:
                        break
                    r5 = ((pos[t5] - p1) * dirn) % n
                    if r5 < 1 or r5 >= r3:
                        continue
                    # a=t1 b=t2 c=t5 d=t6 e=t3 f=t4 -> a D B f
                    t6 = order[(pos[t5] + dirn) % n]
                    gain = g3 + dist[t5, t6] - dist[t6, t1]
                    if gain > 0:
                        _move(order, pos, t1, t2, t3, t4)
                        _move(order, pos, t1, t3, t6, t5)
                        _move(order, pos, t3, t5, t2, t4)
                        out[0] = 6
                        out[1] = t1
                        out[2] = t2
                        out[3] = t3
                        out[4] = t4
                        out[5] = t5
                        out[6] = t6
                        return gain
                    if r5 >= 3:
                        # a=t1 b=t2 c=t6 d=t5 e=t3 f=t4 -> a B' D' f
                        t6 = order[(pos[t5] - dirn) % n]
                        gain = g3 + dist[t5, t6] - dist[t6, t1]
                        if gain > 0:
                            _move(order, pos, t1, t2, t6, t5)
                            _move(order, pos, t2, t5, t3, t4)
                            out[0] = 6
                            out[1] = t1
                            out[2] = t2
                            out[3] = t3
                            out[4] = t4
                            out[5] = t5
                            out[6] = t6
                            return gain
    return 0


@njit(cache=True)
def _descend(order, pos, dist, neigh, dont_look, depth, first):
    """Process the cities whose don't-look bit is off until none is left.

    Two queues: a FIFO seeded with the active cities of ``first`` that also
    receives every city re-activated by a move, and a backlog of the other
    active cities in index order, consulted only when the FIFO is empty.
    Returns (total gain, number of improving moves).
    """
    n = order.shape[0]
    queue = np.empty(n, dtype=np.int64)
    queued = np.zeros(n, dtype=np.bool_)
    head = 0
    size = 0
    for c in first:
        if dont_look[c] == 0 and not queued[c]:
            queue[size] = c
            queued[c] = True
            size += 1
    backlog = np.empty(n, dtype=np.int64)
    n_back = 0
    for c in range(n):
        if dont_look[c] == 0 and not queued[c]:
            backlog[n_back] = c
            n_back += 1
    b = 0
    out = np.zeros(7, dtype=np.int64)
    total = 0
    moves = 0
    while True:
        if size > 0:
            t1 = queue[head]
            head = (head + 1) % n
            size -= 1
            queued[t1] = False
        else:
            while b < n_back and (dont_look[backlog[b]] == 1 or queued[backlog[b]]):
                b += 1
            if b == n_back:
                break
            t1 = backlog[b]
            b += 1
        while True:
            gain = _try_base(order, pos, dist, neigh, t1, depth, out)
            if gain <= 0:
                break
            total += gain
            moves += 1
            for e in range(1, out[0] + 1):
                c = out[e]
                dont_look[c] = 0
                if c != t1 and not queued[c]:
                    queue[(head + size) % n] = c
                    queued[c] = True
                    size += 1
        dont_look[t1] = 1
    return total, moves


@njit(cache=True)
def _local_search(order, dist, neigh, dont_look, depth, until_stable, first):
    n = order.shape[0]
    pos = np.empty(n, dtype=np.int64)
    for i in range(n):
        pos[order[i]] = i
    total, moves = _descend(order, pos, dist, neigh, dont_look, depth, first)
    n_moves = moves
    none = np.empty(0, dtype=np.int64)
    if until_stable:
        while moves > 0:
            dont_look[:] = 0
            gain, moves = _descend(order, pos, dist, neigh, dont_look, depth, none)
            total += gain
            n_moves += moves
    return total, n_moves


def tour_length(inst, order) -> int:
    order = np.asarray(order)
    return int(inst.dist[order, np.roll(order, -1)].sum())


def descend(inst, sol: Solution, depth: int = 3, dont_look=None, radius: int = 25, dist=None, neighbors=None):
    """Run 2-opt (``depth=2``) or 3-opt descent; returns ``(solution, number of improving moves)``."""
    order = np.array(sol.perm, dtype=np.int64)
    n = len(order)
    if n < 4:
        return Solution(order, tour_length(inst, order), np.empty(0, dtype=np.int64)), 0
    from ilsbench.tsp.perturb import activation_order, reset_dont_look_after_perturbation

    until_stable = False
    first = np.empty(0, dtype=np.int64)
    if sol.touched is not None:
        first = activation_order(inst, sol.touched, radius)
    if dont_look is None:
        if sol.touched is None:
            dont_look = np.zeros(n, dtype=np.uint8)
            until_stable = True
        else:
            dont_look = reset_dont_look_after_perturbation(inst, sol.touched, radius)
    else:
        dont_look = np.array(dont_look, dtype=np.uint8)
    d = inst.dist if dist is None else dist
    nb = inst.neighbors if neighbors is None else neighbors
    gain, moves = _local_search(order, d, nb, dont_look, depth, until_stable, first)
    if dist is None:
        cost = sol.cost - gain
    else:
        cost = tour_length(inst, order)
    return Solution(order, cost, np.empty(0, dtype=np.int64)), int(moves)


def local_search_2opt(inst, sol: Solution, dont_look=None, radius: int = 25, **kw) -> Solution:
    """2-opt descent.

    With ``sol.touched`` unset and no ``dont_look`` array, every city starts
    active and the search repeats until a full pass finds nothing, so the
    result is a true local optimum of the candidate-restricted neighbourhood.
    Otherwise only the touched cities (plus ``radius`` neighbours each) start
    active and one don't-look-bit pass is made.
    """
    return descend(inst, sol, 2, dont_look, radius, **kw)[0]


def local_search_3opt(inst, sol: Solution, dont_look=None, radius: int = 25, **kw) -> Solution:
    """3-opt descent (2-opt moves included); same activation rules as 2-opt."""
    return descend(inst, sol, 3, dont_look, radius, **kw)[0]
