"""Experiment configuration files (TOML) and their expansion into run combinations.

Layout::

    name = "qap-strength"
    problem = "qap"                      # optional when file suffixes say it
    instances = ["bundled:kra30x.dat", { generate = "qap-uniform", n = 12, seed = 3 }]
    seeds = [1, 2, 3]
    baseline_rr = true                   # add a random-restart row labelled RR
    sample_every = 100                   # keep best-cost trajectories (0 = off)

    [termination]
    time = 30.0                          # seconds; also: iterations, target

    [components]
    perturbation = "k-exchange"
    strength = ["3", "n/12", "n/4", "n"] # any list is swept

    [acceptance]
    kind = ["better", "restart"]
    patience = 50

Every list value in ``[components]`` and ``[acceptance]`` is a sweep axis;
the experiment runs the full cross product. When ``kind`` is swept, fixed
acceptance parameters are passed only to the criteria that accept them
(``patience`` above reaches ``restart`` but not ``better``).
"""

from __future__ import annotations

import itertools
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from ilsbench.core import Termination, acceptance_parameters
from ilsbench.errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

_FRACTION = re.compile(r"^\s*(\d*)\s*n\s*(?:/\s*(\d+))?\s*$")


def resolve_strength(expr, n: int, floor_at: int | None = None):
    """Turn ``3``, ``"n/12"``, ``"3n/4"`` or ``"n"`` into a concrete value for size ``n``.

    Size-relative forms are floored; ``floor_at`` clamps the result from below.
    Plain numbers pass through unchanged (floats are allowed, e.g. noise magnitudes).
    """
    if isinstance(expr, bool):
        raise ConfigError(f"bad strength {expr!r}")
    if isinstance(expr, (int, float)):
        value = expr
    else:
        m = _FRACTION.match(str(expr))
        if m:
            num = int(m.group(1) or 1)
            den = int(m.group(2) or 1)
            if den == 0:
                raise ConfigError(f"bad strength {expr!r}")
            value = math.floor(num * n / den)
        else:
            try:
                value = float(expr)
            except ValueError:
                raise ConfigError(f"bad strength {expr!r}") from None
            if value.is_integer():
                value = int(value)
    if floor_at is not None:
        value = max(floor_at, value)
    return value


@dataclass(frozen=True)
class Combination:
    """One point of the sweep: component options plus acceptance parameters."""

    components: dict
    acceptance: dict
    label: str
    baseline: bool = False
    params: dict = field(default_factory=dict)


@dataclass
class ExperimentConfig:
    name: str
    instances: list
    seeds: list[int]
    termination: Termination
    components: dict = field(default_factory=dict)
    acceptance: dict = field(default_factory=lambda: {"kind": "better"})
    problem: str | None = None
    baseline_rr: bool = False
    sample_every: int = 0
    layout: str = "machine-major"
    jobs: int = 1
    base_dir: Path = field(default_factory=Path.cwd)

    def __post_init__(self):
        if not self.seeds:
            raise ConfigError("seed list must not be empty")
        if not self.instances:
            raise ConfigError("at least one instance is required")
        if self.sample_every < 0:
            raise ConfigError("sample_every must be >= 0")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def combinations(self) -> list[Combination]:
        axes = [("c", k, v) for k, v in self.components.items() if isinstance(v, list)]
        axes += [("a", k, v) for k, v in self.acceptance.items() if isinstance(v, list)]
        for _, key, values in axes:
            if not values:
                raise ConfigError(f"sweep axis {key!r} is empty")
        out = []
        for choice in itertools.product(*(values for _, _, values in axes)):
            comp = {k: v for k, v in self.components.items() if not isinstance(v, list)}
            acc = {k: v for k, v in self.acceptance.items() if not isinstance(v, list)}
            params = {}
            for (where, key, _), value in zip(axes, choice):
                (comp if where == "c" else acc)[key] = value
                params[key] = value
            if isinstance(self.acceptance.get("kind"), list):
                # shared parameters go only to the criteria that take them
                allowed = acceptance_parameters(acc["kind"]) | {"kind"}
                acc = {k: v for k, v in acc.items() if k in allowed or k in params}
            label = " ".join(f"{k}={v}" for k, v in params.items()) or str(acc.get("kind", "better"))
            out.append(Combination(comp, acc, label, params=params))
        if self.baseline_rr:
            comp = {k: v for k, v in self.components.items() if not isinstance(v, list)}
            comp["perturbation"] = "random-restart"
            comp.pop("strength", None)
            out.append(Combination(comp, {"kind": "better"}, "RR", baseline=True))
        return out


def _termination(table: dict) -> Termination:
    unknown = set(table) - {"time", "iterations", "target"}
    if unknown:
        raise ConfigError(f"unknown termination keys: {sorted(unknown)}")
    return Termination(
        max_wall_time=table.get("time"),
        max_iterations=table.get("iterations"),
        target_cost=table.get("target"),
    )


def config_from_dict(data: dict, base_dir: Path | None = None) -> ExperimentConfig:
    known = {"name", "problem", "instances", "seeds", "termination", "components", "acceptance",
             "baseline_rr", "sample_every", "layout", "jobs"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    instances = data.get("instances", [])
    if isinstance(instances, (str, dict)):
        instances = [instances]
    seeds = data.get("seeds", [])
    if isinstance(seeds, int):
        seeds = list(range(1, seeds + 1))
    if not all(isinstance(s, int) and not isinstance(s, bool) for s in seeds):
        raise ConfigError("seeds must be integers")
    acceptance = dict(data.get("acceptance", {"kind": "better"}))
    acceptance.setdefault("kind", "better")
    return ExperimentConfig(
        name=str(data.get("name", "experiment")),
        instances=list(instances),
        seeds=list(seeds),
        termination=_termination(data.get("termination", {})),
        components=dict(data.get("components", {})),
        acceptance=acceptance,
        problem=data.get("problem"),
        baseline_rr=bool(data.get("baseline_rr", False)),
        sample_every=int(data.get("sample_every", 0)),
        layout=str(data.get("layout", "machine-major")),
        jobs=int(data.get("jobs", 1)),
        base_dir=base_dir or Path.cwd(),
    )


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data, base_dir=path.resolve().parent)
