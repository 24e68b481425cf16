"""Acceptance criteria for the walk over local optima.

Each criterion is a small immutable value; :func:`accept` applies it.  Mutable
state that some criteria need (the current LSMC temperature, the iteration of
the last improvement) lives in :class:`~ilsbench.core.solution.SearchHistory`.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, fields

import numpy as np

from ilsbench.core.solution import SearchHistory, Solution, metropolis_probability
from ilsbench.errors import ParameterError


@dataclass(frozen=True)
class Better:
    name = "better"


@dataclass(frozen=True)
class RandomWalk:
    name = "rw"


@dataclass(frozen=True)
class LSMC:
    """Metropolis acceptance; ``cooling`` multiplies T after every test."""

    temperature: float
    cooling: float = 1.0
    name = "lsmc"

    def __post_init__(self):
        if not self.temperature > 0:
            raise ParameterError(f"temperature must be > 0, got {self.temperature}")
        if not 0 < self.cooling <= 1:
            raise ParameterError(f"cooling factor must be in (0, 1], got {self.cooling}")


@dataclass(frozen=True)
class ConstTemp(LSMC):
    name = "consttemp"

    def __post_init__(self):
        super().__post_init__()
        if self.cooling != 1.0:
            raise ParameterError("ConstTemp keeps its temperature fixed; use LSMC to cool")


@dataclass(frozen=True)
class Restart:
    patience: int
    source: str = "random"
    name = "restart"

    def __post_init__(self):
        if self.patience < 1:
            raise ParameterError(f"restart patience must be >= 1, got {self.patience}")
        if self.source not in ("random", "greedy"):
            raise ParameterError(f"restart source must be 'random' or 'greedy', got {self.source!r}")


@dataclass(frozen=True)
class DistanceEscape:
    """Better acceptance, plus a distance-based escape after ``patience`` idle iterations."""

    copies: int = 10
    keep: int = 3
    min_distance: int = 10
    max_attempts: int = 10
    patience: int = 100
    name = "escape"

    def __post_init__(self):
        if not 1 < self.keep <= self.copies:
            raise ParameterError(f"need 1 < keep <= copies, got keep={self.keep}, copies={self.copies}")
        if self.min_distance < 1:
            raise ParameterError(f"min_distance must be >= 1, got {self.min_distance}")
        if self.max_attempts < 1 or self.patience < 1:
            raise ParameterError("max_attempts and patience must be >= 1")


AcceptanceCriterion = Better | RandomWalk | LSMC | ConstTemp | Restart | DistanceEscape


def current_temperature(criterion: LSMC, history: SearchHistory) -> float:
    return criterion.temperature if history.temperature is None else history.temperature


def accept(
    criterion: AcceptanceCriterion,
    current: Solution,
    candidate: Solution,
    history: SearchHistory,
    rng: np.random.Generator,
    restart: Callable[[], Solution] | None = None,
) -> Solution:
    """Return the next walk state.

    ``restart`` produces the fresh state for Restart and DistanceEscape when
    their patience has run out; without it those criteria never restart.
    """
    improved = candidate.cost < current.cost
    if isinstance(criterion, Better):
        return candidate if improved else current
    if isinstance(criterion, RandomWalk):
        return candidate
    if isinstance(criterion, LSMC):
        if improved:
            return candidate
        p = metropolis_probability(current.cost, candidate.cost, current_temperature(criterion, history))
        return candidate if rng.random() < p else current
    if isinstance(criterion, (Restart, DistanceEscape)):
        if improved:
            return candidate
        if restart is not None and history.iteration - history.last_improvement > criterion.patience:
            return restart()
        return current
    raise ParameterError(f"unknown acceptance criterion {criterion!r}")


_ALIASES = {
    "better": "better",
    "rw": "rw",
    "randomwalk": "rw",
    "random_walk": "rw",
    "lsmc": "lsmc",
    "consttemp": "consttemp",
    "const_temp": "consttemp",
    "restart": "restart",
    "escape": "escape",
    "distanceescape": "escape",
    "distance_escape": "escape",
}


_CLASSES = {
    "better": Better,
    "rw": RandomWalk,
    "lsmc": LSMC,
    "consttemp": ConstTemp,
    "restart": Restart,
    "escape": DistanceEscape,
}


def acceptance_parameters(kind: str) -> set[str]:
    """Keyword parameters that ``make_acceptance`` takes for ``kind``."""
    key = _ALIASES.get(str(kind).lower())
    if key is None:
        raise ParameterError(f"unknown acceptance criterion {kind!r}")
    names = {f.name for f in fields(_CLASSES[key])}
    if "temperature" in names:
        names.add("T")
    return names


def make_acceptance(kind: str, default_temperature: float | None = None, **params) -> AcceptanceCriterion:
    """Build a criterion from a name and keyword parameters (config/CLI entry point).

    ``default_temperature`` is used by LSMC and ConstTemp when no temperature is given.
    """
    key = _ALIASES.get(kind.lower())
    if key is None:
        raise ParameterError(f"unknown acceptance criterion {kind!r}")
    try:
        if key == "better":
            return Better(**params)
        if key == "rw":
            return RandomWalk(**params)
        if key == "lsmc":
            t = params.pop("temperature", params.pop("T", default_temperature))
            return LSMC(temperature=_as_temperature(t), **params)
        if key == "consttemp":
            t = params.pop("temperature", params.pop("T", default_temperature))
            return ConstTemp(temperature=_as_temperature(t), **params)
        if key == "restart":
            return Restart(**params)
        return DistanceEscape(**params)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {kind!r}: {exc}") from None


def _as_temperature(value) -> float:
    if value is None:
        raise ParameterError("temperature-based acceptance needs a temperature")
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return math.inf
    return float(value)
