"""Exhaustive solvers for tiny instances, used as test oracles."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from ilsbench.core import Solution
from ilsbench.errors import SizeLimitError

TSP_CAP = 10
QAP_CAP = 8
FSP_CAP = 8


def _check(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise SizeLimitError(f"exhaustive {what} enumeration is capped at n={cap}, got n={n}")


def brute_force_tsp(inst) -> tuple[int, Solution]:
    """Optimal tour with city 0 fixed first; each tour and its mirror image is tried once."""
    n = inst.n
    _check(n, TSP_CAP, "TSP")
    d = inst.dist
    if n <= 3:
        order = np.arange(n, dtype=np.int64)
        cost = int(sum(d[order[i], order[(i + 1) % n]] for i in range(n)))
        return cost, Solution(order, cost)
    best_cost, best = None, None
    for rest in permutations(range(1, n)):
        if rest[0] > rest[-1]:
            continue  # mirror of a tour already enumerated
        tour = (0,) + rest
        cost = int(sum(d[tour[i], tour[i + 1]] for i in range(n - 1)) + d[tour[-1], 0])
        if best_cost is None or cost < best_cost:
            best_cost, best = cost, tour
    order = np.array(best, dtype=np.int64)
    return best_cost, Solution(order, best_cost)


def brute_force_qap(inst) -> tuple[int, Solution]:
    n = inst.n
    _check(n, QAP_CAP, "QAP")
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    # cost of every permutation at once: sum_ij A[i,j] * B[p_i, p_j]
    b = inst.dist[perms[:, :, None], perms[:, None, :]]
    costs = (b * inst.flow[None]).sum(axis=(1, 2))
    k = int(np.argmin(costs))
    return int(costs[k]), Solution(perms[k].copy(), int(costs[k]))


def brute_force_fsp(inst) -> tuple[int, Solution]:
    n = inst.n_jobs
    _check(n, FSP_CAP, "flow-shop")
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    p = inst.proc[perms]  # (n!, jobs, machines), in sequence order
    c = np.zeros((len(perms), inst.n_machines), dtype=np.int64)
    for k in range(n):
        c[:, 0] += p[:, k, 0]
        for r in range(1, inst.n_machines):
            c[:, r] = np.maximum(c[:, r], c[:, r - 1]) + p[:, k, r]
    costs = c[:, -1]
    k = int(np.argmin(costs))
    return int(costs[k]), Solution(perms[k].copy(), int(costs[k]))


def brute_force(problem) -> tuple[int, Solution]:
    """Dispatch on a problem adapter (``TspProblem``, ``QapProblem`` or ``FspProblem``)."""
    return problem.brute_force()
