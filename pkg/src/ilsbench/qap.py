"""Quadratic assignment: QAPLIB reading, pairwise-exchange descent, k-exchange kicks.

An assignment ``perm`` maps item ``i`` to location ``perm[i]``; its cost is
``sum_ij flow[i, j] * dist[perm[i], perm[j]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np
from numba import njit

from ilsbench.core import Better, Components, Solution, make_acceptance
from ilsbench.core.solution import is_permutation
from ilsbench.errors import ConfigError, ParameterError, ParseError, ValidationError


@dataclass(frozen=True, eq=False)
class QapInstance:
    name: str
    flow: np.ndarray
    dist: np.ndarray
    best_known: int | None = None

    def __post_init__(self):
        for attr in ("flow", "dist"):
            m = np.ascontiguousarray(getattr(self, attr), dtype=np.int64)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ParseError(f"{attr} matrix must be square, got shape {m.shape}")
            m.setflags(write=False)
            object.__setattr__(self, attr, m)
        if self.flow.shape != self.dist.shape:
            raise ParseError(f"flow is {self.flow.shape} but dist is {self.dist.shape}")

    @property
    def n(self) -> int:
        return self.flow.shape[0]


def parse_qaplib(text: bytes | str, name: str = "qap", best_known: int | None = None) -> QapInstance:
    """Read ``n`` followed by the flow and distance matrices (whitespace separated)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    tokens = text.split()
    if not tokens:
        raise ParseError("empty QAPLIB file")
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError(f"first token must be the size n, got {tokens[0]!r}") from None
    if n < 1:
        raise ParseError(f"size must be positive, got {n}")
    if len(tokens) != 1 + 2 * n * n:
        raise ParseError(f"size {n} needs {1 + 2 * n * n} tokens, found {len(tokens)}")
    try:
        values = np.array([int(t) for t in tokens[1:]], dtype=np.int64)
    except ValueError as exc:
        raise ParseError(f"non-integer matrix entry: {exc}") from None
    flow = values[: n * n].reshape(n, n)
    dist = values[n * n :].reshape(n, n)
    return QapInstance(name, flow, dist, best_known)


def format_qaplib(inst: QapInstance) -> str:
    out = [str(inst.n), ""]
    for m in (inst.flow, inst.dist):
        out += [" ".join(str(int(v)) for v in row) for row in m]
        out.append("")
    return "\n".join(out)


def random_instance(n: int, rng: np.random.Generator, high: int = 100, name: str | None = None) -> QapInstance:
    flow = rng.integers(0, high, size=(n, n))
    dist = rng.integers(0, high, size=(n, n))
    return QapInstance(name or f"rand{n}", flow, dist)


def qap_cost(inst: QapInstance, perm) -> int:
    perm = np.asarray(perm)
    return int((inst.flow * inst.dist[np.ix_(perm, perm)]).sum())


@njit(cache=True)
def _swap_delta(flow, dist, p, r, s):
    if r == s:
        return 0
    pr = p[r]
    ps = p[s]
    d = (flow[r, r] - flow[s, s]) * (dist[ps, ps] - dist[pr, pr]) + (flow[r, s] - flow[s, r]) * (
        dist[ps, pr] - dist[pr, ps]
    )
    for k in range(p.shape[0]):
        if k == r or k == s:
            continue
        pk = p[k]
        d += (flow[k, r] - flow[k, s]) * (dist[pk, ps] - dist[pk, pr]) + (flow[r, k] - flow[s, k]) * (
            dist[ps, pk] - dist[pr, pk]
        )
    return d


def swap_delta(inst: QapInstance, perm, i: int, j: int) -> int:
    """Cost change from exchanging the locations of items ``i`` and ``j``, in O(n)."""
    return int(_swap_delta(inst.flow, inst.dist, np.asarray(perm, dtype=np.int64), i, j))


@njit(cache=True)
def _descend(flow, dist, p):
    n = p.shape[0]
    total = 0
    r = 0
    s = 1
    while r < n - 1:
        d = _swap_delta(flow, dist, p, r, s)
        if d < 0:
            tmp = p[r]
            p[r] = p[s]
            p[s] = tmp
            total += d
            r = 0
            s = 1
            continue
        s += 1
        if s == n:
            r += 1
            s = r + 1
    return total


def local_search_qap(inst: QapInstance, sol: Solution) -> Solution:
    """First-improvement pairwise exchange; the scan restarts at (0, 1) after each improving swap."""
    p = np.array(sol.perm, dtype=np.int64)
    if len(p) < 2:
        return Solution(p, qap_cost(inst, p))
    gain = _descend(inst.flow, inst.dist, p)
    return Solution(p, sol.cost + int(gain))


def random_derangement(k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform permutation of range(k) without fixed points (rejection sampling)."""
    if k < 2:
        raise ParameterError(f"no derangement of {k} elements")
    idx = np.arange(k)
    while True:
        p = rng.permutation(k)
        if not np.any(p == idx):
            return p


def k_exchange(perm, k: int, rng: np.random.Generator, derangement: bool = True) -> np.ndarray:
    """Move ``k`` random items among their own locations.

    By default the locations are deranged, so exactly ``k`` entries change;
    with ``derangement=False`` a uniform shuffle is used (fixed points allowed).
    """
    perm = np.asarray(perm)
    n = len(perm)
    if not 2 <= k <= n:
        raise ParameterError(f"exchange strength must be in [2, {n}], got {k}")
    items = rng.choice(n, size=k, replace=False)
    shuffle = random_derangement(k, rng) if derangement else rng.permutation(k)
    out = perm.copy()
    out[items] = perm[items[shuffle]]
    return out


def hamming(a, b) -> int:
    return int(np.count_nonzero(np.asarray(a) != np.asarray(b)))


def random_assignment(inst: QapInstance, rng: np.random.Generator) -> Solution:
    p = rng.permutation(inst.n).astype(np.int64)
    return Solution(p, qap_cost(inst, p))


def greedy_assignment(inst: QapInstance, rng: np.random.Generator, rcl: int = 3) -> Solution:
    """Randomised greedy: heavy-flow items first, each to one of the ``rcl`` cheapest free locations."""
    n = inst.n
    a = inst.flow + inst.flow.T
    b = inst.dist + inst.dist.T
    order = np.lexsort((rng.random(n), -a.sum(axis=1)))
    p = -np.ones(n, dtype=np.int64)
    free = np.ones(n, dtype=bool)
    placed: list[int] = []
    for item in order:
        locs = np.flatnonzero(free)
        if placed:
            pl = np.asarray(placed)
            costs = (a[item, pl][None, :] * b[np.ix_(locs, p[pl])]).sum(axis=1)
        else:
            costs = b[locs].sum(axis=1)
        cands = locs[np.argsort(costs, kind="stable")[:rcl]]
        loc = int(rng.choice(cands))
        p[item] = loc
        free[loc] = False
        placed.append(int(item))
    return Solution(p, qap_cost(inst, p))


def format_assignment(perm, cost: int) -> str:
    return " ".join(str(int(x)) for x in perm) + f"\ncost {int(cost)}\n"


class QapProblem:
    kind = "qap"

    def __init__(self, inst: QapInstance):
        self.instance = inst

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def name(self) -> str:
        return self.instance.name

    @property
    def best_known(self):
        return self.instance.best_known

    def evaluate(self, perm) -> int:
        perm = np.asarray(perm)
        if len(perm) != self.n or not is_permutation(perm):
            raise ValidationError(f"assignment must be a permutation of 0..{self.n - 1}")
        return qap_cost(self.instance, perm)

    def format_solution(self, sol: Solution) -> str:
        return format_assignment(sol.perm, sol.cost)

    def brute_force(self):
        from ilsbench.bench.oracle import brute_force_qap

        return brute_force_qap(self.instance)

    def components(
        self,
        acceptance=None,
        perturbation: str = "k-exchange",
        strength: int | None = None,
        initial: str = "random",
        derangement: bool = True,
    ) -> Components:
        """ILS parts; the default strength is max(4, n // 4), capped at n.

        Small kicks tend to fall back into the basin they came from: a
        2-exchange is one swap and a 3-exchange is two, both easily undone by
        the pairwise-exchange descent. Hence the floor of 4.
        """
        inst = self.instance
        n = inst.n
        if acceptance is None:
            acceptance = Better()
        elif isinstance(acceptance, str):
            acceptance = make_acceptance(acceptance)
        if perturbation == "k-exchange":
            k = min(n, max(4, n // 4)) if strength is None else int(strength)
            if not 2 <= k <= n:
                raise ConfigError(f"exchange strength must be in [2, {n}], got {k}")

            def perturb(s, history, rng):
                p = k_exchange(s.perm, k, rng, derangement)
                return Solution(p, qap_cost(inst, p))

        elif perturbation == "random-restart":

            def perturb(s, history, rng):
                return random_assignment(inst, rng)

        else:
            raise ConfigError(f"unknown QAP perturbation {perturbation!r}")

        if initial == "random":
            init = partial(random_assignment, inst)
        elif initial == "greedy":
            init = partial(greedy_assignment, inst)
        else:
            raise ConfigError(f"unknown QAP initial solution {initial!r}")

        return Components(
            initial=init,
            local_search=partial(local_search_qap, inst),
            perturbation=perturb,
            acceptance=acceptance,
            restart_sources={"random": partial(random_assignment, inst), "greedy": partial(greedy_assignment, inst)},
            distance=lambda a, b: hamming(a.perm, b.perm),
        )
