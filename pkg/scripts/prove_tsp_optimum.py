"""Prove the optimal tour length of a symmetric TSP instance (development tool).

Method: subtour-elimination LP over all edges (column generation plus
min-cut separation), then an integer program with lazily added subtour cuts
over the edges whose reduced cost is small. Every tour through an edge ``f``
costs at least ``LB + rc_f``. If the integer optimum ``z`` over the edge set
satisfies ``LB + rc_f > z`` for every excluded edge, ``z`` is the optimum;
otherwise the offending edges are added and the program is solved again.

Needs scipy (HiGHS) and networkx; run from the repository root:

    python scripts/prove_tsp_optimum.py src/ilsbench/data/E400.tsp
"""

from __future__ import annotations

import argparse
import sys
import time

import networkx as nx
import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp
from scipy.sparse import coo_matrix

from ilsbench.bench.instances import load_instance
from ilsbench.core import Termination, run_ils
from ilsbench.tsp import TspProblem


def constraint_matrix(n, edges, cuts):
    """Rows: n degree rows, then one row per cut x(delta(S))."""
    m = len(edges)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([np.arange(m), np.arange(m)])
    a_eq = coo_matrix((np.ones(2 * m), (rows, cols)), shape=(n, m)).tocsr()
    if not cuts:
        return a_eq, None
    r, c = [], []
    for k, s in enumerate(cuts):
        cross = np.flatnonzero(s[edges[:, 0]] != s[edges[:, 1]])
        r.append(np.full(len(cross), k))
        c.append(cross)
    r = np.concatenate(r)
    c = np.concatenate(c)
    a_ub = coo_matrix((-np.ones(len(r)), (r, c)), shape=(len(cuts), m)).tocsr()
    return a_eq, a_ub


def solve_lp(n, edges, cost, cuts):
    a_eq, a_ub = constraint_matrix(n, edges, cuts)
    kw = {}
    if a_ub is not None:
        kw = {"A_ub": a_ub, "b_ub": -2 * np.ones(len(cuts))}
    res = linprog(cost, A_eq=a_eq, b_eq=2 * np.ones(n), bounds=(0, 1), method="highs", **kw)
    if res.status != 0:
        raise RuntimeError(res.message)
    pi = res.eqlin.marginals
    mu = -res.ineqlin.marginals if a_ub is not None else np.zeros(0)
    return res.fun, res.x, pi, mu


def separate(n, edges, x, tol=1e-6):
    """Subtour cuts from connected components, then a global minimum cut."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for (u, v), w in zip(edges, x):
        if w > tol:
            g.add_edge(int(u), int(v), weight=float(w))
    comps = list(nx.connected_components(g))
    cuts = []
    if len(comps) > 1:
        for comp in comps:
            s = np.zeros(n, dtype=bool)
            s[list(comp)] = True
            cuts.append(s)
        return cuts
    value, (side, _) = nx.stoer_wagner(g)
    if value < 2 - tol:
        s = np.zeros(n, dtype=bool)
        s[list(side)] = True
        cuts.append(s)
    return cuts


def reduced_costs(dist, pi, mu, cuts):
    rc = dist - pi[:, None] - pi[None, :]
    for s, m in zip(cuts, mu):
        if m > 1e-12:
            rc -= m * (s[:, None] != s[None, :])
    return rc


def prove(inst, ub_seconds: float = 60.0, seed: int = 1, log=print, ub_runs: int = 1):
    n = inst.n
    dist = inst.dist.astype(float)
    p = TspProblem(inst)
    rec = min((run_ils(p, p.components(), Termination(max_wall_time=ub_seconds), seed=seed + k)
               for k in range(ub_runs)), key=lambda r: r.best_cost)
    ub = rec.best_cost
    log(f"{inst.name}: heuristic upper bound {ub}")

    iu = np.triu_indices(n, 1)
    in_lp = np.zeros((n, n), dtype=bool)
    for c in range(n):
        for d in inst.neighbors[c, :10]:
            in_lp[min(c, d), max(c, d)] = True
    tour = rec.best.perm
    for a, b in zip(tour, np.roll(tour, -1)):
        in_lp[min(a, b), max(a, b)] = True

    cuts: list[np.ndarray] = []
    t0 = time.time()
    while True:
        edges = np.argwhere(in_lp)
        lb, x, pi, mu = solve_lp(n, edges, dist[edges[:, 0], edges[:, 1]], cuts)
        new = separate(n, edges, x)
        if new:
            cuts += new
            continue
        rc = reduced_costs(dist, pi, mu, cuts)
        neg = (rc[iu] < -1e-7) & ~in_lp[iu]
        if not neg.any():
            break
        in_lp[iu[0][neg], iu[1][neg]] = True
    log(f"  LP bound {lb:.2f} with {len(cuts)} cuts, {len(edges)} edges ({time.time() - t0:.0f}s)")

    gap = ub - lb
    keep = in_lp.copy()
    keep[iu] |= rc[iu] <= gap / 2
    t0 = time.time()
    while True:
        edges = np.argwhere(np.triu(keep, 1))
        log(f"  integer program over {len(edges)} edges (gap {gap:.1f})")
        z, cuts = solve_ip(n, edges, dist, cuts, log)
        missing = ~keep[iu] & (rc[iu] <= z - lb + 1.0)
        if not missing.any():
            break
        log(f"  {int(missing.sum())} excluded edges could still improve; adding them")
        keep[iu[0][missing], iu[1][missing]] = True
    opt = int(round(z))
    log(f"  optimum {opt} ({time.time() - t0:.0f}s); heuristic excess {100 * (ub - opt) / opt:.3f}%")
    return opt, ub, lb


def solve_ip(n, edges, dist, cuts, log):
    """Integer optimum over ``edges`` with subtour cuts added until the solution is a tour."""
    cost = dist[edges[:, 0], edges[:, 1]]
    cuts = list(cuts)
    while True:
        a_eq, a_ub = constraint_matrix(n, edges, cuts)
        cons = [LinearConstraint(a_eq, 2, 2)]
        if a_ub is not None:
            cons.append(LinearConstraint(a_ub, -np.inf, -2))
        res = milp(cost, constraints=cons, integrality=np.ones(len(edges)), bounds=Bounds(0, 1),
                   options={"disp": False, "mip_rel_gap": 0})
        if res.status != 0:
            raise RuntimeError(res.message)
        new = separate(n, edges, np.round(res.x))
        if not new:
            return res.fun, cuts
        cuts += new
        log(f"  integer solution has subtours; {len(cuts)} cuts")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="+")
    ap.add_argument("--ub-seconds", type=float, default=60.0)
    ap.add_argument("--ub-runs", type=int, default=1)
    args = ap.parse_args(argv)
    for f in args.files:
        inst = load_instance(f)
        opt, _, _ = prove(inst, args.ub_seconds, ub_runs=args.ub_runs)
        print(f"{f}\t{opt}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
