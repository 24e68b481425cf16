from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ilsbench.core.solution import SearchHistory, Solution
from ilsbench.errors import ParameterError


@dataclass
class EscapeResult:
    solution: Solution
    distance: int
    attempts: int
    n_local_searches: int
    failed: bool


def escape_beyond_distance(
    s_c: Solution,
    copies: int,
    keep: int,
    min_distance: int,
    max_attempts: int,
    perturb: Callable[[Solution, SearchHistory | None, np.random.Generator], Solution],
    local_search: Callable[[Solution], Solution],
    distance_fn: Callable[[Solution, Solution], int],
    rng: np.random.Generator,
    history: SearchHistory | None = None,
) -> EscapeResult:
    """Find a good local optimum more than ``min_distance`` away from ``s_c``.

    Each attempt perturbs and re-optimises ``copies`` copies of ``s_c``, keeps
    the ``keep`` cheapest, and takes the one farthest from ``s_c``.  After
    ``max_attempts`` unsuccessful batches the farthest candidate seen so far is
    returned with ``failed`` set.
    """
    if not 1 < keep <= copies:
        raise ParameterError(f"need 1 < keep <= copies, got keep={keep}, copies={copies}")
    if max_attempts < 1:
        raise ParameterError("max_attempts must be >= 1")

    fallback: Solution | None = None
    fallback_key = None
    n_ls = 0
    for attempt in range(1, max_attempts + 1):
        batch = []
        for _ in range(copies):
            batch.append(local_search(perturb(s_c, history, rng)))
            n_ls += 1
        # stable sort: equal costs keep generation order
        batch.sort(key=lambda s: s.cost)
        chosen, chosen_d = None, -1
        for cand in batch[:keep]:
            d = distance_fn(cand, s_c)
            if d > chosen_d:
                chosen, chosen_d = cand, d
        if chosen_d > min_distance:
            return EscapeResult(chosen, chosen_d, attempt, n_ls, failed=False)
        key = (-chosen_d, chosen.cost)
        if fallback_key is None or key < fallback_key:
            fallback, fallback_key = chosen, key
    return EscapeResult(fallback, -fallback_key[0], max_attempts, n_ls, failed=True)
