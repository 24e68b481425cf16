"""Regenerate the bundled fixtures in src/ilsbench/data (development tool).

    python scripts/make_fixtures.py            # instance files only
    python scripts/make_fixtures.py --prove    # also prove TSP optima, search QAP best-known

Every instance is a deterministic function of the seeds below. TSP optima
come from scripts/prove_tsp_optimum.py; the QAP value is the best cost seen
over long multi-seed runs and is therefore only a best-known upper bound.
With --prove, entries already in best_known.json are kept unless named by
--redo (or --redo all).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ilsbench import fsp, qap, tsp

DATA = Path(__file__).resolve().parents[1] / "src" / "ilsbench" / "data"
TSP_SIZES = {"E100.tsp": (100, 100), "E400.tsp": (400, 401), "E600.tsp": (600, 601), "E800.tsp": (800, 801)}
QAP_NAME = "kra30x.dat"
FSP_NAME = "tai50x20.fsp"
TAILLARD_SEED = 1328042058


def kra_like(n: int, rng: np.random.Generator) -> qap.QapInstance:
    """Hospital-layout style QAP: rooms on a 2-floor grid with rectilinear
    distances, sparse symmetric integer flows concentrated on a few items."""
    cells = [(f, r, c) for f in range(2) for r in range(4) for c in range(6)]
    pick = rng.choice(len(cells), size=n, replace=False)
    pts = np.array([cells[i] for i in sorted(pick)])
    # moving between floors costs a detour through the lift at column 0
    same = pts[:, None, 0] == pts[None, :, 0]
    walk = np.abs(pts[:, None, 1] - pts[None, :, 1]) + np.abs(pts[:, None, 2] - pts[None, :, 2])
    lift = pts[:, None, 2] + pts[None, :, 2] + np.abs(pts[:, None, 1] - pts[None, :, 1]) + 2 * np.abs(
        pts[:, None, 0] - pts[None, :, 0]
    )
    dist = 10 * np.where(same, walk, lift)
    weight = rng.gamma(0.6, 1.0, size=n)
    flow = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                v = int(np.ceil(rng.exponential(1.5) * (weight[i] + weight[j])))
                flow[i, j] = flow[j, i] = min(v, 20)
    return qap.QapInstance("kra30x", flow, dist)


def write_instances() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for name, (n, seed) in TSP_SIZES.items():
        inst = tsp.random_euclidean(n, np.random.default_rng(seed), name=Path(name).stem)
        (DATA / name).write_text(tsp.format_tsplib(inst))
    (DATA / QAP_NAME).write_text(qap.format_qaplib(kra_like(30, np.random.default_rng(30))))
    (DATA / FSP_NAME).write_text(fsp.format_taillard(fsp.taillard_instance(50, 20, TAILLARD_SEED)))


def qap_best_known(path: Path, seeds: int, seconds: float) -> int:
    from ilsbench.bench.instances import load_instance
    from ilsbench.core import Restart, Termination, run_ils

    inst = load_instance(path)
    p = qap.QapProblem(inst)
    best = None
    for seed in range(1000, 1000 + seeds):
        for k in (max(2, inst.n // 6), max(2, inst.n // 4), max(2, inst.n // 3)):
            rec = run_ils(p, p.components(Restart(50), strength=k), Termination(max_wall_time=seconds), seed)
            best = rec.best_cost if best is None else min(best, rec.best_cost)
        print(f"  seed {seed}: best so far {best}", flush=True)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--prove", action="store_true")
    ap.add_argument("--qap-seeds", type=int, default=20)
    ap.add_argument("--qap-seconds", type=float, default=60.0)
    ap.add_argument("--redo", nargs="*", default=[], help="entries to recompute with --prove, or 'all'")
    args = ap.parse_args(argv)
    write_instances()
    if not args.prove:
        return 0
    sys.path.insert(0, str(Path(__file__).parent))
    from prove_tsp_optimum import prove

    from ilsbench.bench.instances import load_instance

    sidecar = DATA / "best_known.json"
    table = json.loads(sidecar.read_text()) if sidecar.is_file() else {}

    def wanted(name):
        return name not in table or "all" in args.redo or name in args.redo

    def save():
        sidecar.write_text(json.dumps(table, indent=2, sort_keys=True) + "\n")

    for name in TSP_SIZES:
        if wanted(name):
            opt, _, _ = prove(load_instance(DATA / name), ub_seconds=60.0, ub_runs=3,
                              log=lambda m: print(m, flush=True))
            table[name] = {"cost": opt, "status": "optimal"}
            save()
    if wanted(QAP_NAME):
        table[QAP_NAME] = {"cost": qap_best_known(DATA / QAP_NAME, args.qap_seeds, args.qap_seconds),
                           "status": "best-known"}
        save()
    return 0

if __name__ == "__main__":
    sys.exit(main())
