from __future__ import annotations

import numpy as np

from ilsbench.core.solution import is_permutation
from ilsbench.errors import ParameterError, ValidationError


def validate_tour(order, n: int | None = None) -> None:
    order = np.asarray(order)
    if n is not None and len(order) != n:
        raise ValidationError(f"tour has {len(order)} cities, instance has {n}")
    if not is_permutation(order):
        raise ValidationError("tour is not a permutation of 0..n-1")


def tour_distance(t1, t2) -> int:
    """Number of edges of ``t1`` that are not edges of ``t2`` (undirected)."""
    t1 = np.asarray(t1)
    t2 = np.asarray(t2)
    n = len(t1)
    if len(t2) != n:
        raise ParameterError(f"tours differ in length: {n} vs {len(t2)}")
    if n <= 3:
        return 0
    pos2 = np.empty(n, dtype=np.int64)
    pos2[t2] = np.arange(n)
    gap = np.abs(pos2[t1] - pos2[np.roll(t1, -1)])
    return int(np.count_nonzero((gap != 1) & (gap != n - 1)))


def edge_set(order) -> set[tuple[int, int]]:
    order = [int(c) for c in order]
    n = len(order)
    return {tuple(sorted((order[i], order[(i + 1) % n]))) for i in range(n)}


def format_tour(order, length: int) -> str:
    lines = [str(int(c)) for c in order]
    lines.append(f"length {int(length)}")
    return "\n".join(lines) + "\n"
