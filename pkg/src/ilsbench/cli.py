"""Command-line entry point: ``ilsbench run | solve | oracle | check | aggregate``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from ilsbench import __version__
from ilsbench.bench.config import load_config
from ilsbench.bench.experiment import build_components, run_experiment
from ilsbench.bench.instances import infer_kind, load_instance, make_problem, resolve_path
from ilsbench.bench.report import FORMATS, aggregate, emit_report, read_runs, runs_to_jsonl
from ilsbench.core import Termination, run_ils
from ilsbench.errors import IlsError, ValidationError

REPORT_DIR_ENV = "ILSBENCH_REPORT_DIR"
EXIT_CODES = {
    "config": 2,
    "parameter": 2,
    "parse": 3,
    "unsupported-format": 3,
    "invalid-solution": 4,
    "size-limit": 5,
    "degenerate-instance": 6,
    "io": 7,
}
SUFFIX = {"csv": "csv", "markdown": "md", "json-lines": "jsonl"}


def _load_problem(path: str, kind: str | None, layout: str):
    p = resolve_path(path, Path.cwd())
    kind = kind or infer_kind(p)
    return make_problem(kind, load_instance(p, kind, layout=layout))


def cmd_run(args) -> int:
    config = load_config(args.config)
    if args.jobs:
        config.jobs = args.jobs
    base = Path(args.out or os.environ.get(REPORT_DIR_ENV) or "reports")
    out = base / config.name

    def progress(run):
        if not args.quiet:
            print(f"{run['instance']} [{run['config']}] seed={run['seed']} best={run['best_cost']} "
                  f"#LS={run['n_local_searches']}", file=sys.stderr)

    report = run_experiment(config, progress=progress)
    out.mkdir(parents=True, exist_ok=True)
    for fmt in FORMATS:
        (out / f"report.{SUFFIX[fmt]}").write_bytes(emit_report(report, fmt))
    (out / "runs.jsonl").write_text(runs_to_jsonl(report.runs))
    if report.trajectories:
        (out / "trajectories.jsonl").write_text("".join(json.dumps(t) + "\n" for t in report.trajectories))
    sys.stdout.write(emit_report(report, args.format).decode())
    print(f"report written to {out}", file=sys.stderr)
    return 0


def _acceptance_options(args) -> dict:
    acc = {"kind": args.acceptance}
    for key in ("temperature", "cooling", "patience", "source", "copies", "keep", "min_distance", "max_attempts"):
        value = getattr(args, key)
        if value is not None:
            acc[key] = value
    return acc


def cmd_solve(args) -> int:
    problem = _load_problem(args.problem_file, args.problem, args.layout)
    comp = {}
    for key in ("perturbation", "strength", "initial", "local_search", "n_swaps", "n_interchanges"):
        value = getattr(args, key)
        if value is not None:
            comp[key] = value
    comps = build_components(problem, comp, _acceptance_options(args))
    if args.time is None and args.iterations is None and args.target is None:
        args.time = 10.0
    term = Termination(max_wall_time=args.time, max_iterations=args.iterations, target_cost=args.target)
    rec = run_ils(problem, comps, term, args.seed)
    sys.stdout.write(problem.format_solution(rec.best))
    print(f"iterations {rec.iterations} local_searches {rec.n_local_searches} elapsed {rec.elapsed:.3f}s",
          file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    problem = _load_problem(args.problem_file, args.problem, args.layout)
    _, sol = problem.brute_force()
    sys.stdout.write(problem.format_solution(sol))
    return 0


def read_solution(text: str) -> tuple[list[int], int | None]:
    """Integers of a solution file plus the cost claimed on a trailing ``length|cost|makespan N`` line."""
    perm: list[int] = []
    claimed = None
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if not tokens:
            continue
        if tokens[0].lower() in ("length", "cost", "makespan"):
            if len(tokens) != 2:
                raise ValidationError(f"line {lineno}: expected '{tokens[0]} <value>'")
            claimed = int(tokens[1])
            continue
        try:
            perm += [int(t) for t in tokens]
        except ValueError:
            raise ValidationError(f"line {lineno}: not an integer list: {line.strip()!r}") from None
    return perm, claimed


def cmd_check(args) -> int:
    problem = _load_problem(args.problem_file, args.problem, args.layout)
    try:
        text = Path(args.solution_file).read_text()
    except FileNotFoundError:
        raise ValidationError(f"solution file not found: {args.solution_file}") from None
    perm, claimed = read_solution(text)
    cost = problem.evaluate(np.array(perm, dtype=np.int64))
    if claimed is not None and claimed != cost:
        raise ValidationError(f"claimed cost {claimed} but the solution evaluates to {cost}")
    print(f"valid cost {cost}")
    return 0


def cmd_aggregate(args) -> int:
    report = aggregate(read_runs(Path(args.runs).read_text()))
    sys.stdout.write(emit_report(report, args.format).decode())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ilsbench", description="Iterated local search benchmarks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p):
        p.add_argument("problem_file", help="instance file, or bundled:<name> for a packaged fixture")
        p.add_argument("--problem", choices=["tsp", "qap", "fsp"], help="override detection by file suffix")
        p.add_argument("--layout", default="machine-major", choices=["machine-major", "job-major"],
                       help="flow-shop matrix layout")

    p = sub.add_parser("run", help="run an experiment config and write its report")
    p.add_argument("config")
    p.add_argument("--out", help=f"report directory (default ${REPORT_DIR_ENV} or ./reports)")
    p.add_argument("--format", default="markdown", choices=FORMATS, help="format echoed to stdout")
    p.add_argument("--jobs", type=int, help="parallel worker processes")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("solve", help="single ILS run; prints the best solution and its cost")
    problem_args(p)
    p.add_argument("--acceptance", default="better")
    p.add_argument("--temperature", help="LSMC/ConstTemp temperature ('inf' allowed)")
    p.add_argument("--cooling", type=float)
    p.add_argument("--patience", type=int, help="Restart/DistanceEscape patience i_r")
    p.add_argument("--source", choices=["random", "greedy"], help="Restart source")
    p.add_argument("--copies", type=int)
    p.add_argument("--keep", type=int)
    p.add_argument("--min-distance", dest="min_distance", type=int)
    p.add_argument("--max-attempts", dest="max_attempts", type=int)
    p.add_argument("--perturbation")
    p.add_argument("--strength", help="e.g. 1, 5, 3, n/4")
    p.add_argument("--initial")
    p.add_argument("--local-search", dest="local_search", choices=["2opt", "3opt"])
    p.add_argument("--n-swaps", dest="n_swaps", type=int)
    p.add_argument("--n-interchanges", dest="n_interchanges", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--time", type=float, help="wall-time budget in seconds (default 10)")
    p.add_argument("--iterations", type=int)
    p.add_argument("--target", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive optimum of a tiny instance")
    problem_args(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check", help="validate and re-score a solution file")
    p.add_argument("solution_file")
    problem_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("aggregate", help="rebuild a report from a runs.jsonl file")
    p.add_argument("runs")
    p.add_argument("--format", default="csv", choices=FORMATS)
    p.set_defaults(func=cmd_aggregate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IlsError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_CODES["io"]


if __name__ == "__main__":
    sys.exit(main())
