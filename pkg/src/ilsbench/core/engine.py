from __future__ import annotations

import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from ilsbench.core.acceptance import LSMC, AcceptanceCriterion, DistanceEscape, Restart, accept
from ilsbench.core.escape import escape_beyond_distance
from ilsbench.core.solution import RunRecord, SearchHistory, Solution, Termination, rng_streams
from ilsbench.errors import ConfigError

IterationCallback = Callable[[int, int, int, float], None]


@dataclass
class Components:
    """The pluggable parts of one ILS configuration.

    ``perturbation`` must return a new :class:`Solution` and leave its input
    untouched; ``local_search`` likewise.  ``restart_sources`` maps a Restart
    source name ("random", "greedy") to a constructor of fresh, not yet
    locally optimised solutions.
    """

    initial: Callable[[np.random.Generator], Solution]
    local_search: Callable[[Solution], Solution]
    perturbation: Callable[[Solution, SearchHistory, np.random.Generator], Solution]
    acceptance: AcceptanceCriterion
    restart_sources: Mapping[str, Callable[[np.random.Generator], Solution]] = field(default_factory=dict)
    distance: Callable[[Solution, Solution], int] | None = None


def check_components(n: int, components: Components) -> None:
    if n < 2:
        raise ConfigError(f"problem size must be >= 2, got {n}")
    crit = components.acceptance
    if isinstance(crit, Restart) and crit.source not in components.restart_sources:
        raise ConfigError(f"no {crit.source!r} restart source available for this problem")
    if isinstance(crit, DistanceEscape):
        if components.distance is None:
            raise ConfigError("DistanceEscape needs a solution distance function")
        if crit.min_distance >= n:
            raise ConfigError(f"DistanceEscape min_distance={crit.min_distance} can never be exceeded when n={n}")


def run_ils(
    problem,
    components: Components,
    termination: Termination,
    seed: int,
    on_iteration: IterationCallback | None = None,
    label: str = "",
) -> RunRecord:
    """Run one iterated local search and return its record.

    ``problem`` only needs an ``n`` attribute here; everything
    problem-specific is inside ``components``.  The best local optimum ever
    produced is kept even when the acceptance criterion walks away from it.
    """
    check_components(problem.n, components)
    streams = rng_streams(seed)
    crit = components.acceptance
    ls = components.local_search
    start = time.monotonic()

    s = ls(components.initial(streams["initial"]))
    n_ls = 1
    history = SearchHistory(best=s)
    if isinstance(crit, LSMC):
        history.temperature = crit.temperature
    history.trace.append(0, s.cost, s.cost, time.monotonic() - start)
    if on_iteration is not None:
        on_iteration(0, s.cost, s.cost, history.trace.elapsed[-1])

    n_accepted = n_restarts = n_escape_failures = 0

    def fresh_restart() -> Solution:
        nonlocal n_ls, n_restarts
        n_ls += 1
        n_restarts += 1
        return ls(components.restart_sources[crit.source](streams["restart"]))

    def escape() -> Solution:
        nonlocal n_ls, n_restarts, n_escape_failures
        res = escape_beyond_distance(
            history.best,
            crit.copies,
            crit.keep,
            crit.min_distance,
            crit.max_attempts,
            components.perturbation,
            ls,
            components.distance,
            streams["restart"],
            history,
        )
        n_ls += res.n_local_searches
        n_restarts += 1
        n_escape_failures += res.failed
        return res.solution

    restart = fresh_restart if isinstance(crit, Restart) else escape if isinstance(crit, DistanceEscape) else None

    while True:
        elapsed = time.monotonic() - start
        if termination.reached(history.iteration, elapsed, history.best.cost):
            break
        history.iteration += 1
        candidate = ls(components.perturbation(s, history, streams["perturbation"]))
        n_ls += 1
        if candidate.cost < history.best.cost:
            history.best = candidate

        restarts_before = n_restarts
        nxt = accept(crit, s, candidate, history, streams["acceptance"], restart)
        if isinstance(crit, LSMC) and crit.cooling != 1.0:
            history.temperature *= crit.cooling
        if nxt is candidate:
            n_accepted += 1
            if candidate.cost < s.cost:
                history.last_improvement = history.iteration
        elif n_restarts != restarts_before:
            history.last_improvement = history.iteration
            if nxt.cost < history.best.cost:
                history.best = nxt
        s = nxt

        elapsed = time.monotonic() - start
        history.trace.append(history.iteration, s.cost, history.best.cost, elapsed)
        if on_iteration is not None:
            on_iteration(history.iteration, s.cost, history.best.cost, elapsed)

    return RunRecord(
        seed=seed,
        best=history.best,
        n_local_searches=n_ls,
        n_accepted=n_accepted,
        elapsed=time.monotonic() - start,
        trace=history.trace,
        iterations=history.iteration,
        n_restarts=n_restarts,
        n_escape_failures=n_escape_failures,
        label=label,
    )
