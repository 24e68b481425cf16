"""Symmetric TSP instances and TSPLIB reading/writing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ilsbench.errors import ParseError, UnsupportedFormatError

DEFAULT_CANDIDATES = 40

_EXPLICIT_FORMATS = ("FULL_MATRIX", "UPPER_ROW", "LOWER_ROW", "UPPER_DIAG_ROW", "LOWER_DIAG_ROW")


@dataclass(frozen=True, eq=False)
class TspInstance:
    """An immutable symmetric TSP instance with integer distances.

    ``neighbors[c]`` holds the candidate list of city ``c``: its nearest
    cities, closest first, ties broken by city index.
    """

    name: str
    dist: np.ndarray
    coords: np.ndarray | None = None
    neighbors: np.ndarray = field(default=None, repr=False)
    best_known: int | None = None
    comment: str = ""

    def __post_init__(self):
        dist = np.ascontiguousarray(self.dist, dtype=np.int64)
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        if self.coords is not None:
            coords = np.ascontiguousarray(self.coords, dtype=np.float64)
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)
        if self.neighbors is None:
            object.__setattr__(self, "neighbors", candidate_lists(dist, DEFAULT_CANDIDATES))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def is_euclidean(self) -> bool:
        return self.coords is not None

    @cached_property
    def mean_nn_distance(self) -> float:
        return mean_nearest_neighbor_distance(self.coords)

    def d(self, a: int, b: int) -> int:
        return int(self.dist[a, b])

    def with_candidates(self, k: int) -> TspInstance:
        return TspInstance(self.name, self.dist, self.coords, candidate_lists(self.dist, k), self.best_known, self.comment)


def nint(x):
    """Round to nearest integer, halves away from zero (TSPLIB convention)."""
    x = np.asarray(x, dtype=np.float64)
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


def euc_2d_matrix(coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.float64)
    diff = coords[:, None, :] - coords[None, :, :]
    return nint(np.sqrt((diff**2).sum(axis=-1)))


def candidate_lists(dist: np.ndarray, k: int) -> np.ndarray:
    n = dist.shape[0]
    k = max(0, min(k, n - 1))
    # push self to the end of each row's ordering
    keyed = dist.astype(np.float64).copy()
    np.fill_diagonal(keyed, np.inf)
    order = np.argsort(keyed, axis=1, kind="stable")[:, :k]
    out = np.ascontiguousarray(order, dtype=np.int32)
    out.setflags(write=False)
    return out


def from_coords(coords, name: str = "euclidean", best_known: int | None = None, comment: str = "") -> TspInstance:
    coords = np.asarray(coords, dtype=np.float64)
    return TspInstance(name, euc_2d_matrix(coords), coords, best_known=best_known, comment=comment)


def from_matrix(matrix, name: str = "explicit", best_known: int | None = None) -> TspInstance:
    m = np.asarray(matrix, dtype=np.int64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParseError(f"distance matrix must be square, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise ParseError("distance matrix is not symmetric")
    if np.any(np.diag(m) != 0):
        raise ParseError("distance matrix has a nonzero diagonal")
    return TspInstance(name, m, None, best_known=best_known)


def random_euclidean(n: int, rng: np.random.Generator, scale: int = 10_000, name: str | None = None) -> TspInstance:
    """Uniform random integer coordinates in [0, scale)^2."""
    coords = rng.integers(0, scale, size=(n, 2)).astype(np.float64)
    return from_coords(coords, name or f"rand{n}")


def parse_tsplib(text: bytes | str) -> TspInstance:
    """Parse a TSPLIB ``TYPE: TSP`` file with EUC_2D or EXPLICIT weights."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    lines = text.splitlines()
    header: dict[str, str] = {}
    coords: dict[int, tuple[float, float]] = {}
    weights: list[float] = []
    weights_line = None
    section = None
    coord_line = None

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper == "EOF":
            break
        if upper.endswith("_SECTION") and ":" not in line:
            section = upper
            if section == "NODE_COORD_SECTION":
                coord_line = lineno
            elif section == "EDGE_WEIGHT_SECTION":
                weights_line = lineno
            elif section not in ("DISPLAY_DATA_SECTION", "FIXED_EDGES_SECTION", "TOUR_SECTION"):
                raise UnsupportedFormatError(f"unsupported section {section}", lineno)
            continue
        if ":" in line and not _looks_numeric(line.split(":", 1)[0]):
            key, value = line.split(":", 1)
            header[key.strip().upper()] = value.strip()
            section = None
            continue
        if section == "NODE_COORD_SECTION":
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"expected 'id x y', got {line!r}", lineno)
            try:
                idx = int(parts[0])
                coords[idx] = (float(parts[1]), float(parts[2]))
            except ValueError:
                raise ParseError(f"bad coordinate line {line!r}", lineno) from None
            dim = header.get("DIMENSION", "")
            if dim.isdigit() and not 1 <= idx <= int(dim):
                raise ParseError(f"node id {idx} outside DIMENSION {dim}", lineno)
            coord_line = lineno
        elif section == "EDGE_WEIGHT_SECTION":
            try:
                weights.extend(float(tok) for tok in line.split())
            except ValueError:
                raise ParseError(f"bad edge weight line {line!r}", lineno) from None
            weights_line = lineno
        elif section in ("DISPLAY_DATA_SECTION", "FIXED_EDGES_SECTION", "TOUR_SECTION"):
            continue
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)

    kind = header.get("TYPE", "TSP").split()[0].upper()
    if kind != "TSP":
        raise UnsupportedFormatError(f"unsupported TYPE {kind}")
    if "DIMENSION" not in header:
        raise ParseError("missing DIMENSION")
    try:
        n = int(header["DIMENSION"])
    except ValueError:
        raise ParseError(f"bad DIMENSION {header['DIMENSION']!r}") from None
    name = header.get("NAME", "unnamed")
    comment = header.get("COMMENT", "")
    wtype = header.get("EDGE_WEIGHT_TYPE", "").upper()

    if wtype == "EUC_2D":
        if len(coords) != n or set(coords) != set(range(1, n + 1)):
            raise ParseError(
                f"DIMENSION is {n} but NODE_COORD_SECTION has {len(coords)} nodes", coord_line
            )
        xy = np.array([coords[i] for i in range(1, n + 1)], dtype=np.float64)
        return from_coords(xy, name=name, comment=comment)
    if wtype == "EXPLICIT":
        fmt = header.get("EDGE_WEIGHT_FORMAT", "").upper()
        if fmt not in _EXPLICIT_FORMATS:
            raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_FORMAT {fmt or '(missing)'}")
        m = _explicit_matrix(n, fmt, weights, weights_line)
        inst = from_matrix(m, name=name)
        object.__setattr__(inst, "comment", comment)
        return inst
    raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_TYPE {wtype or '(missing)'}")


def _looks_numeric(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def _explicit_matrix(n: int, fmt: str, weights: list[float], line) -> np.ndarray:
    expected = {
        "FULL_MATRIX": n * n,
        "UPPER_ROW": n * (n - 1) // 2,
        "LOWER_ROW": n * (n - 1) // 2,
        "UPPER_DIAG_ROW": n * (n + 1) // 2,
        "LOWER_DIAG_ROW": n * (n + 1) // 2,
    }[fmt]
    if len(weights) != expected:
        raise ParseError(f"{fmt} with DIMENSION {n} needs {expected} weights, found {len(weights)}", line)
    w = np.asarray(weights)
    if np.any(w != np.round(w)):
        raise ParseError("explicit edge weights must be integers", line)
    w = w.astype(np.int64)
    if fmt == "FULL_MATRIX":
        return w.reshape(n, n)
    idx = {
        "UPPER_ROW": np.triu_indices(n, 1),
        "UPPER_DIAG_ROW": np.triu_indices(n),
        "LOWER_ROW": np.tril_indices(n, -1),
        "LOWER_DIAG_ROW": np.tril_indices(n),
    }[fmt]
    m = np.zeros((n, n), dtype=np.int64)
    m[idx] = w
    return m + m.T - np.diag(np.diag(m))


def format_tsplib(inst: TspInstance) -> str:
    out = [f"NAME : {inst.name}"]
    if inst.comment:
        out.append(f"COMMENT : {inst.comment}")
    out += ["TYPE : TSP", f"DIMENSION : {inst.n}"]
    if inst.coords is not None:
        out.append("EDGE_WEIGHT_TYPE : EUC_2D")
        out.append("NODE_COORD_SECTION")
        for i, (x, y) in enumerate(inst.coords, start=1):
            out.append(f"{i} {_num(x)} {_num(y)}")
    else:
        out += ["EDGE_WEIGHT_TYPE : EXPLICIT", "EDGE_WEIGHT_FORMAT : FULL_MATRIX", "EDGE_WEIGHT_SECTION"]
        for row in inst.dist:
            out.append(" ".join(str(int(v)) for v in row))
    out.append("EOF")
    return "\n".join(out) + "\n"


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def mean_nearest_neighbor_distance(coords: np.ndarray) -> float:
    diff = coords[:, None, :] - coords[None, :, :]
    d = np.sqrt((diff**2).sum(axis=-1))
    np.fill_diagonal(d, math.inf)
    return float(d.min(axis=1).mean())
