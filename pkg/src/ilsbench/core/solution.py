from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ilsbench.errors import ConfigError

# Fixed labels for the per-run random sub-streams.  Changing how many numbers
# one component draws never shifts another component's stream.
STREAM_LABELS = {"initial": 1, "perturbation": 2, "acceptance": 3, "restart": 4}


def rng_streams(seed: int) -> dict[str, np.random.Generator]:
    """Split one run seed into independent, labelled generators."""
    return {
        name: np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(code,)))
        for name, code in STREAM_LABELS.items()
    }


@dataclass(slots=True)
class Solution:
    """A permutation with its cached integer cost.

    ``touched`` optionally lists the elements whose neighbourhood changed
    since the last local search (``None`` means "everything"); only the TSP
    local search reads it, to seed its don't-look bits.
    """

    perm: np.ndarray
    cost: int
    touched: np.ndarray | None = None

    def __post_init__(self):
        self.cost = int(self.cost)

    @property
    def n(self) -> int:
        return len(self.perm)

    def copy(self) -> Solution:
        return Solution(self.perm.copy(), self.cost, None if self.touched is None else self.touched.copy())

    def is_permutation(self) -> bool:
        return is_permutation(self.perm)


def is_permutation(perm) -> bool:
    perm = np.asarray(perm)
    n = len(perm)
    if perm.ndim != 1 or n == 0:
        return False
    seen = np.zeros(n, dtype=bool)
    for v in perm:
        if v < 0 or v >= n or seen[v]:
            return False
        seen[v] = True
    return True


class Trace:
    """Per-iteration walk record: iteration, accepted cost, best cost, wall time."""

    __slots__ = ("iteration", "cost", "best", "elapsed")

    def __init__(self):
        self.iteration: list[int] = []
        self.cost: list[int] = []
        self.best: list[int] = []
        self.elapsed: list[float] = []

    def append(self, iteration: int, cost: int, best: int, elapsed: float) -> None:
        self.iteration.append(iteration)
        self.cost.append(cost)
        self.best.append(best)
        self.elapsed.append(elapsed)

    def __len__(self) -> int:
        return len(self.iteration)

    def rows(self):
        return list(zip(self.iteration, self.cost, self.best, self.elapsed))

    def decisions(self):
        """The trace without wall-clock columns; identical across reruns of one seed."""
        return list(zip(self.iteration, self.cost, self.best))


@dataclass
class SearchHistory:
    iteration: int = 0
    last_improvement: int = 0
    best: Solution | None = None
    temperature: float | None = None
    trace: Trace = field(default_factory=Trace)


@dataclass(frozen=True)
class Termination:
    max_wall_time: float | None = None
    max_iterations: int | None = None
    target_cost: int | None = None

    def __post_init__(self):
        if self.max_wall_time is None and self.max_iterations is None and self.target_cost is None:
            raise ConfigError("termination needs at least one of max_wall_time, max_iterations, target_cost")
        if self.max_wall_time is not None and not self.max_wall_time > 0:
            raise ConfigError(f"max_wall_time must be positive, got {self.max_wall_time}")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ConfigError(f"max_iterations must be >= 0, got {self.max_iterations}")

    def reached(self, iteration: int, elapsed: float, best_cost: int) -> bool:
        if self.max_iterations is not None and iteration >= self.max_iterations:
            return True
        if self.target_cost is not None and best_cost <= self.target_cost:
            return True
        return self.max_wall_time is not None and elapsed >= self.max_wall_time


@dataclass
class RunRecord:
    seed: int
    best: Solution
    n_local_searches: int
    n_accepted: int
    elapsed: float
    trace: Trace
    iterations: int = 0
    n_restarts: int = 0
    n_escape_failures: int = 0
    label: str = ""

    @property
    def best_cost(self) -> int:
        return self.best.cost

    def best_series(self) -> list[int]:
        return list(self.trace.best)


def metropolis_probability(current_cost: int, candidate_cost: int, temperature: float) -> float:
    """exp((C(current) - C(candidate)) / T), with the T = inf and T -> 0 limits spelled out."""
    delta = current_cost - candidate_cost
    if delta >= 0:
        return 1.0
    if math.isinf(temperature):
        return 1.0
    if temperature <= 0:
        return 0.0
    return math.exp(delta / temperature)
