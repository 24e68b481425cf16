"""Multi-seed experiment execution."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ilsbench.bench.config import Combination, ExperimentConfig, resolve_strength
from ilsbench.bench.instances import generate_instance, infer_kind, load_instance, make_problem, resolve_path
from ilsbench.bench.report import Report, aggregate, trajectory_capture
from ilsbench.core import Components, Termination, check_components, make_acceptance, run_ils
from ilsbench.errors import ConfigError, IlsError


def build_components(problem, components: dict, acceptance: dict) -> Components:
    """Turn plain option dicts (from a config file or the CLI) into checked ILS components."""
    comp = dict(components)
    acc = dict(acceptance)
    kind = acc.pop("kind", "better")
    default_t = problem.instance.default_temperature() if problem.kind == "fsp" else None
    criterion = make_acceptance(str(kind), default_temperature=default_t, **acc)
    if "strength" in comp:
        if problem.kind == "qap":
            comp["strength"] = min(problem.n, resolve_strength(comp["strength"], problem.n, floor_at=2))
        elif problem.kind == "tsp":
            comp["strength"] = resolve_strength(comp["strength"], problem.n)
        else:
            raise ConfigError("flow-shop perturbation is set with n_swaps and n_interchanges, not strength")
    try:
        built = problem.components(acceptance=criterion, **comp)
    except TypeError as exc:
        raise ConfigError(f"option not valid for {problem.kind}: {exc}") from None
    check_components(problem.n, built)
    return built


@dataclass(frozen=True)
class _Task:
    kind: str
    instance: object
    combo: Combination
    termination: Termination
    seed: int
    sample_every: int


def _execute(task: _Task) -> tuple[dict, list | None]:
    problem = make_problem(task.kind, task.instance)
    comps = build_components(problem, task.combo.components, task.combo.acceptance)
    rec = run_ils(problem, comps, task.termination, task.seed, label=task.combo.label)
    run = {
        "instance": problem.name,
        "config": task.combo.label,
        "params": dict(task.combo.params),
        "baseline": task.combo.baseline,
        "seed": task.seed,
        "best_cost": rec.best_cost,
        "best_known": problem.best_known,
        "n_local_searches": rec.n_local_searches,
        "n_accepted": rec.n_accepted,
        "n_restarts": rec.n_restarts,
        "iterations": rec.iterations,
        "elapsed": rec.elapsed,
        "best_perm": [int(x) for x in rec.best.perm],
    }
    series = trajectory_capture(rec, task.sample_every) if task.sample_every else None
    return run, series


def resolve_instances(config: ExperimentConfig) -> list[tuple[str, object]]:
    """Load or generate every instance up front, so a bad path fails before any run starts."""
    resolved = []
    for ref in config.instances:
        if isinstance(ref, dict):
            kind, inst = generate_instance(ref)
        else:
            path = resolve_path(str(ref), config.base_dir)
            kind = config.problem or infer_kind(path)
            inst = load_instance(path, kind, layout=config.layout)
        if config.problem and kind != config.problem:
            raise ConfigError(f"instance {ref!r} is a {kind} instance but the experiment is {config.problem}")
        resolved.append((kind, inst))
    return resolved


def run_experiment(config: ExperimentConfig, progress=None) -> Report:
    """Run every (instance, combination, seed) triple and aggregate the results.

    All instances are resolved and all component combinations are built once
    before the first run, so configuration mistakes surface immediately.
    ``progress`` (optional) is called with each finished run dict.
    """
    instances = resolve_instances(config)
    combos = config.combinations()
    tasks = []
    for kind, inst in instances:
        problem = make_problem(kind, inst)
        for combo in combos:
            try:
                build_components(problem, combo.components, combo.acceptance)
            except IlsError as exc:
                raise ConfigError(f"{problem.name} / {combo.label}: {exc}") from None
            tasks += [_Task(kind, inst, combo, config.termination, s, config.sample_every) for s in config.seeds]

    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = []
            for result in pool.map(_execute, tasks):
                results.append(result)
                if progress is not None:
                    progress(result[0])
    else:
        results = []
        for task in tasks:
            results.append(_execute(task))
            if progress is not None:
                progress(results[-1][0])

    runs = [run for run, _ in results]
    report = aggregate(runs)
    if config.sample_every:
        report.trajectories = [
            {"instance": run["instance"], "config": run["config"], "seed": run["seed"], "series": series}
            for run, series in results
        ]
    return report

