"""Locating, loading and generating problem instances."""

from __future__ import annotations

import json
from dataclasses import replace
from importlib import resources
from pathlib import Path

import numpy as np

from ilsbench import fsp, qap, tsp
from ilsbench.errors import ConfigError, UnsupportedFormatError

SUFFIX_KIND = {".tsp": "tsp", ".dat": "qap", ".qap": "qap", ".fsp": "fsp"}
SIDECAR = "best_known.json"
PROBLEMS = {"tsp": tsp.TspProblem, "qap": qap.QapProblem, "fsp": fsp.FspProblem}


def data_dir() -> Path:
    """Directory holding the bundled fixtures."""
    return Path(str(resources.files("ilsbench") / "data"))


def bundled(name: str) -> Path:
    path = data_dir() / name
    if not path.is_file():
        raise ConfigError(f"no bundled fixture named {name!r}")
    return path


def resolve_path(ref: str, base: Path | None = None) -> Path:
    """``bundled:<file>`` names a packaged fixture; other paths are relative to ``base``."""
    if ref.startswith("bundled:"):
        return bundled(ref.removeprefix("bundled:"))
    path = Path(ref).expanduser()
    if not path.is_absolute() and base is not None:
        path = base / path
    if not path.is_file():
        raise ConfigError(f"instance file not found: {path}")
    return path


def infer_kind(path: Path) -> str:
    kind = SUFFIX_KIND.get(path.suffix.lower())
    if kind is None:
        raise UnsupportedFormatError(f"cannot tell the problem type of {path.name}; use .tsp, .dat/.qap or .fsp")
    return kind


def sidecar_best_known(path: Path) -> int | None:
    side = path.parent / SIDECAR
    if not side.is_file():
        return None
    table = json.loads(side.read_text())
    entry = table.get(path.name)
    if isinstance(entry, dict):
        entry = entry.get("cost")
    return None if entry is None else int(entry)


def load_instance(path: str | Path, kind: str | None = None, layout: str = "machine-major"):
    """Parse an instance file, attaching the best-known cost from a sidecar if one exists."""
    path = resolve_path(str(path))
    kind = kind or infer_kind(path)
    data = path.read_bytes()
    best = sidecar_best_known(path)
    name = path.stem
    if kind == "tsp":
        inst = tsp.parse_tsplib(data)
        return replace(inst, name=inst.name or name, best_known=best)
    if kind == "qap":
        return qap.parse_qaplib(data, name=name, best_known=best)
    if kind == "fsp":
        return fsp.parse_taillard(data, layout=layout, name=name, best_known=best)
    raise ConfigError(f"unknown problem type {kind!r}")


def generate_instance(spec: dict):
    """Build a synthetic instance from a generator table such as ``{generate = "tsp-euclidean", n = 100, seed = 1}``."""
    spec = dict(spec)
    gen = spec.pop("generate", None)
    seed = int(spec.pop("seed", 0))
    rng = np.random.default_rng(seed)
    try:
        if gen == "tsp-euclidean":
            n = int(spec.pop("n"))
            return "tsp", tsp.random_euclidean(n, rng, name=f"E{n}.{seed}", **spec)
        if gen == "qap-uniform":
            n = int(spec.pop("n"))
            return "qap", qap.random_instance(n, rng, name=f"U{n}.{seed}", **spec)
        if gen == "fsp-taillard":
            nj, nm = int(spec.pop("n_jobs")), int(spec.pop("n_machines"))
            return "fsp", fsp.taillard_instance(nj, nm, seed, name=f"T{nj}x{nm}.{seed}")
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad generator spec for {gen!r}: {exc}") from None
    raise ConfigError(f"unknown instance generator {gen!r}")


def make_problem(kind: str, inst):
    try:
        return PROBLEMS[kind](inst)
    except KeyError:
        raise ConfigError(f"unknown problem type {kind!r}") from None
