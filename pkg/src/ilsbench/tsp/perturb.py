from __future__ import annotations

import numpy as np

from ilsbench.core.solution import Solution
from ilsbench.errors import DegenerateInstanceError, UnsupportedFormatError


def double_bridge_order(order: np.ndarray, cuts) -> np.ndarray:
    """Reconnect the four segments split at positions ``a < b < c``.

    With A = [0, a), B = [a, b), C = [b, c), D = [c, n) the result is
    A D C B: all four boundary edges (including the closing D-A edge) are
    replaced, and no segment is reversed.
    """
    a, b, c = cuts
    return np.concatenate((order[:a], order[c:], order[b:c], order[a:b]))


def changes_four_edges(n: int, cuts) -> bool:
    """True when the A D C B reconnection replaces four distinct edges.

    Two segments that are neighbours both before and after the move and are
    single cities would leave their joining edge in place.
    """
    a, b, c = cuts
    lengths = (a, b - a, c - b, n - c)
    return min(lengths) >= 1 and not any(lengths[i] == 1 and lengths[i - 1] == 1 for i in range(4))


def random_cuts(n: int, rng: np.random.Generator) -> tuple[int, int, int]:
    """Uniform over the cut triples that change exactly four edges."""
    if n < 8:
        raise DegenerateInstanceError(f"double-bridge needs n >= 8, got {n}")
    while True:
        a, b, c = (int(x) for x in np.sort(rng.choice(np.arange(1, n), size=3, replace=False)))
        if changes_four_edges(n, (a, b, c)):
            return a, b, c


def double_bridge(order: np.ndarray, rng: np.random.Generator, cuts=None) -> tuple[np.ndarray, np.ndarray]:
    """One uniform double-bridge kick.

    Returns the new order and the four breakpoint cities (the tail city of
    each removed edge), which seed the don't-look-bit reset.
    """
    order = np.asarray(order)
    n = len(order)
    if n < 8:
        raise DegenerateInstanceError(f"double-bridge needs n >= 8, got {n}")
    a, b, c = random_cuts(n, rng) if cuts is None else cuts
    breakpoints = order[[a - 1, b - 1, c - 1, n - 1]].copy()
    return double_bridge_order(order, (a, b, c)), breakpoints


def biased_cuts(order: np.ndarray, neighbors: np.ndarray, rng: np.random.Generator, bias: int) -> tuple[int, int, int]:
    """Cuts whose reconnection edges tend to be short.

    The first cut is uniform; the other two are placed next to cities drawn
    from the first ``bias`` candidates of the first cut's city.  Falls back to
    uniform cuts when no valid triple comes out after a few tries.
    """
    n = len(order)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    k = min(bias, neighbors.shape[1])
    for _ in range(10):
        p = int(rng.integers(1, n))
        city = order[p - 1]
        picks = neighbors[city, rng.choice(k, size=min(2, k), replace=False)] if k >= 2 else []
        cuts = {p} | {int(pos[x]) + 1 for x in picks}
        cuts.discard(n)
        cuts.discard(0)
        if len(cuts) == 3 and changes_four_edges(n, sorted(cuts)):
            a, b, c = sorted(cuts)
            return a, b, c
    return random_cuts(n, rng)


def k_double_bridge(order: np.ndarray, k: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """``k`` double-bridge kicks in sequence; breakpoints of all of them."""
    if k < 1:
        raise DegenerateInstanceError(f"need at least one double-bridge, got k={k}")
    out = np.asarray(order)
    points = []
    for _ in range(k):
        out, bp = double_bridge(out, rng)
        points.append(bp)
    return out, np.unique(np.concatenate(points))


def activation_order(inst, breakpoints, radius: int) -> np.ndarray:
    """Cities around a kick, nearest first: the breakpoints, then every
    breakpoint's first neighbour, then every second neighbour, and so on
    (up to ``radius`` ranks, capped by the candidate-list length)."""
    breakpoints = np.asarray(breakpoints, dtype=np.int64)
    if len(breakpoints) == 0:
        return breakpoints
    r = max(0, min(radius, inst.neighbors.shape[1]))
    cols = inst.neighbors[breakpoints, :r].T.ravel().astype(np.int64)
    seq = np.concatenate((breakpoints, cols))
    _, idx = np.unique(seq, return_index=True)
    return seq[np.sort(idx)]


def reset_dont_look_after_perturbation(inst, breakpoints, radius: int) -> np.ndarray:
    """Don't-look bits after a kick: all set except around the breakpoints.

    The breakpoint cities and their ``radius`` nearest neighbours get their
    bit cleared (0); every other city keeps it set (1).
    """
    n = inst.n
    bits = np.ones(n, dtype=np.uint8)
    breakpoints = np.asarray(breakpoints, dtype=np.int64)
    if radius >= n - 1:
        bits[:] = 0
        return bits
    bits[breakpoints] = 0
    if radius <= 0 or len(breakpoints) == 0:
        return bits
    if radius <= inst.neighbors.shape[1]:
        bits[inst.neighbors[breakpoints, :radius].ravel()] = 0
    else:
        for b in breakpoints:
            row = inst.dist[b].astype(np.float64)
            row[b] = np.inf
            bits[np.argsort(row, kind="stable")[:radius]] = 0
    return bits


def coordinate_noise_perturbation(inst, sol: Solution, magnitude: float, rng: np.random.Generator, depth: int = 2) -> Solution:
    """Re-optimise ``sol`` on jittered city coordinates.

    Each coordinate moves uniformly within +-magnitude times the mean
    nearest-neighbour distance; the tour is then improved by descent under
    the jittered metric and returned with its length under the true metric.
    """
    from ilsbench.tsp.instance import euc_2d_matrix
    from ilsbench.tsp.localsearch import local_search_2opt, local_search_3opt, tour_length

    if inst.coords is None:
        raise UnsupportedFormatError("coordinate noise needs coordinates (EUC_2D), not an explicit matrix")
    scale = magnitude * inst.mean_nn_distance
    noisy = inst.coords + rng.uniform(-scale, scale, size=inst.coords.shape)
    dist = euc_2d_matrix(noisy)
    start = Solution(np.asarray(sol.perm).copy(), sol.cost)
    search = local_search_2opt if depth == 2 else local_search_3opt
    moved = search(inst, start, dist=dist)
    order = moved.perm
    return Solution(order, tour_length(inst, order), changed_cities(sol.perm, order))


def changed_cities(before: np.ndarray, after: np.ndarray) -> np.ndarray:
    """Cities whose pair of tour neighbours differs between two tours."""
    before = np.asarray(before)
    after = np.asarray(after)
    n = len(before)
    nb = np.empty((n, 2), dtype=np.int64)
    na = np.empty((n, 2), dtype=np.int64)
    nb[before, 0] = np.roll(before, 1)
    nb[before, 1] = np.roll(before, -1)
    na[after, 0] = np.roll(after, 1)
    na[after, 1] = np.roll(after, -1)
    nb.sort(axis=1)
    na.sort(axis=1)
    return np.flatnonzero((nb != na).any(axis=1))
