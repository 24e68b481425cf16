"""Permutation flow shop: Taillard-format reading, makespan, NEH, insert descent, swap/interchange kicks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np
from numba import njit

from ilsbench.core import Components, ConstTemp, Solution, make_acceptance
from ilsbench.core.solution import is_permutation
from ilsbench.errors import ConfigError, ParameterError, ParseError, ValidationError

LAYOUTS = ("machine-major", "job-major")


@dataclass(frozen=True, eq=False)
class FspInstance:
    """``proc[j, m]`` is the processing time of job ``j`` on machine ``m``."""

    name: str
    proc: np.ndarray
    best_known: int | None = None

    def __post_init__(self):
        p = np.ascontiguousarray(self.proc, dtype=np.int64)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ParseError(f"processing-time matrix must be 2-D and non-empty, got shape {p.shape}")
        if (p < 0).any():
            raise ParseError("processing times must be non-negative")
        p.setflags(write=False)
        object.__setattr__(self, "proc", p)

    @property
    def n_jobs(self) -> int:
        return self.proc.shape[0]

    @property
    def n_machines(self) -> int:
        return self.proc.shape[1]

    @property
    def n(self) -> int:
        return self.n_jobs

    def default_temperature(self) -> float:
        """Total processing time / (10 * jobs * machines), floored at 1e-9 for all-zero data."""
        return max(float(self.proc.sum()) / (10 * self.n_jobs * self.n_machines), 1e-9)


def parse_taillard(
    text: bytes | str, layout: str = "machine-major", name: str = "fsp", best_known: int | None = None
) -> FspInstance:
    """Read ``n_jobs n_machines`` and the processing-time matrix.

    Lines holding anything other than integers are skipped, so Taillard's
    annotated files load as well as bare matrices. If the first numeric line
    carries five values (jobs, machines, seed, upper bound, lower bound) the
    last three are dropped.
    """
    if layout not in LAYOUTS:
        raise ParameterError(f"layout must be one of {LAYOUTS}, got {layout!r}")
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    rows: list[tuple[int, list[int]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if not tokens:
            continue
        try:
            rows.append((lineno, [int(t) for t in tokens]))
        except ValueError:
            continue
    if not rows:
        raise ParseError("no numeric data found")
    header_line, header = rows[0]
    if len(header) not in (2, 5):
        raise ParseError("header must hold n_jobs and n_machines", line=header_line)
    n_jobs, n_machines = header[:2]
    if n_jobs < 1 or n_machines < 1:
        raise ParseError(f"sizes must be positive, got {n_jobs} x {n_machines}", line=header_line)
    values = [v for _, r in rows[1:] for v in r]
    if len(values) != n_jobs * n_machines:
        last = rows[-1][0]
        raise ParseError(f"expected {n_jobs * n_machines} processing times, found {len(values)}", line=last)
    arr = np.array(values, dtype=np.int64)
    proc = arr.reshape(n_machines, n_jobs).T if layout == "machine-major" else arr.reshape(n_jobs, n_machines)
    return FspInstance(name, proc, best_known)


def format_taillard(inst: FspInstance) -> str:
    lines = [f"{inst.n_jobs} {inst.n_machines}"]
    lines += [" ".join(str(int(v)) for v in row) for row in inst.proc.T]
    return "\n".join(lines) + "\n"


def taillard_instance(n_jobs: int, n_machines: int, seed: int, name: str | None = None) -> FspInstance:
    """Processing times in 1..99 from Taillard's portable generator, machine by machine."""
    a, b, c, m = 16807, 127773, 2836, 2**31 - 1
    x = int(seed)
    proc = np.empty((n_jobs, n_machines), dtype=np.int64)
    for mach in range(n_machines):
        for job in range(n_jobs):
            k = x // b
            x = a * (x % b) - k * c
            if x < 0:
                x += m
            proc[job, mach] = 1 + int(x / m * 99)
    return FspInstance(name or f"tai{n_jobs}x{n_machines}_{seed}", proc)


@njit(cache=True)
def _makespan(proc, seq):
    m = proc.shape[1]
    c = np.zeros(m, dtype=np.int64)
    for k in range(seq.shape[0]):
        job = seq[k]
        c[0] += proc[job, 0]
        for r in range(1, m):
            c[r] = max(c[r], c[r - 1]) + proc[job, r]
    return c[m - 1]


def makespan(inst: FspInstance, seq) -> int:
    return int(_makespan(inst.proc, np.asarray(seq, dtype=np.int64)))


@njit(cache=True)
def _insert_costs_full(proc, partial_seq, job):
    """Makespan of inserting ``job`` at every position 0..k, by full re-evaluation."""
    k = partial_seq.shape[0]
    out = np.empty(k + 1, dtype=np.int64)
    buf = np.empty(k + 1, dtype=np.int64)
    for t in range(k + 1):
        buf[:t] = partial_seq[:t]
        buf[t] = job
        buf[t + 1 :] = partial_seq[t:]
        out[t] = _makespan(proc, buf)
    return out


@njit(cache=True)
def _insert_costs_fast(proc, partial_seq, job):
    """Same as ``_insert_costs_full`` via heads, tails and insertion fronts, in O(k m)."""
    k = partial_seq.shape[0]
    m = proc.shape[1]
    e = np.zeros((k + 1, m + 1), dtype=np.int64)
    q = np.zeros((k + 2, m + 2), dtype=np.int64)
    for t in range(1, k + 1):
        jt = partial_seq[t - 1]
        for r in range(1, m + 1):
            e[t, r] = max(e[t - 1, r], e[t, r - 1]) + proc[jt, r - 1]
    for t in range(k, 0, -1):
        jt = partial_seq[t - 1]
        for r in range(m, 0, -1):
            q[t, r] = max(q[t + 1, r], q[t, r + 1]) + proc[jt, r - 1]
    out = np.empty(k + 1, dtype=np.int64)
    f = np.zeros(m + 1, dtype=np.int64)
    for t in range(k + 1):
        best = 0
        for r in range(1, m + 1):
            f[r] = max(f[r - 1], e[t, r]) + proc[job, r - 1]
            v = f[r] + q[t + 1, r]
            if v > best:
                best = v
        out[t] = best
    return out


@njit(cache=True)
def _insert_costs(proc, partial_seq, job, fast):
    if fast:
        return _insert_costs_fast(proc, partial_seq, job)
    return _insert_costs_full(proc, partial_seq, job)


@njit(cache=True)
def _neh(proc, order, fast):
    seq = np.empty(0, dtype=np.int64)
    for job in order:
        costs = _insert_costs(proc, seq, job, fast)
        t = np.argmin(costs)  # first minimum
        nxt = np.empty(seq.shape[0] + 1, dtype=np.int64)
        nxt[:t] = seq[:t]
        nxt[t] = job
        nxt[t + 1 :] = seq[t:]
        seq = nxt
    return seq


def neh(inst: FspInstance, accelerated: bool = True) -> Solution:
    """NEH: jobs by non-increasing total time (lower index first on ties), each at its best position."""
    order = np.argsort(-inst.proc.sum(axis=1), kind="stable").astype(np.int64)
    seq = _neh(inst.proc, order, accelerated)
    return Solution(seq, makespan(inst, seq))


def randomized_neh(inst: FspInstance, rng: np.random.Generator, accelerated: bool = True) -> Solution:
    """NEH insertion applied to the jobs in random order."""
    seq = _neh(inst.proc, rng.permutation(inst.n_jobs).astype(np.int64), accelerated)
    return Solution(seq, makespan(inst, seq))


def random_sequence(inst: FspInstance, rng: np.random.Generator) -> Solution:
    seq = rng.permutation(inst.n_jobs).astype(np.int64)
    return Solution(seq, makespan(inst, seq))


@njit(cache=True)
def _insert_descent(proc, seq, fast):
    n = seq.shape[0]
    cost = _makespan(proc, seq)
    rest = np.empty(n - 1, dtype=np.int64)
    improved = True
    while improved:
        improved = False
        for i in range(n):
            job = seq[i]
            rest[:i] = seq[:i]
            rest[i:] = seq[i + 1 :]
            costs = _insert_costs(proc, rest, job, fast)
            for j in range(n):
                if j != i and costs[j] < cost:
                    seq[:j] = rest[:j]
                    seq[j] = job
                    seq[j + 1 :] = rest[j:]
                    cost = costs[j]
                    improved = True
                    break
    return cost


def local_search_insert(inst: FspInstance, sol: Solution, accelerated: bool = True) -> Solution:
    """First-improvement insert descent.

    Removal positions are scanned in ascending order and, for each, insertion
    positions in ascending order; the first improving move is applied and the
    scan continues with the next removal position. Passes repeat until a full
    pass finds nothing. ``accelerated`` only changes how the candidate
    makespans are computed, never which move is taken.
    """
    seq = np.array(sol.perm, dtype=np.int64)
    if len(seq) < 2:
        return Solution(seq, makespan(inst, seq))
    cost = _insert_descent(inst.proc, seq, accelerated)
    return Solution(seq, int(cost))


def fsp_perturb(seq, n_swaps: int, n_interchanges: int, rng: np.random.Generator) -> np.ndarray:
    """Random adjacent swaps and arbitrary interchanges, applied in shuffled order."""
    if n_swaps < 0 or n_interchanges < 0:
        raise ParameterError(f"move counts must be non-negative, got ({n_swaps}, {n_interchanges})")
    if n_swaps == 0 and n_interchanges == 0:
        raise ParameterError("perturbation needs at least one swap or interchange")
    out = np.array(seq, copy=True)
    n = len(out)
    if n < 2:
        raise ParameterError("perturbation needs at least two jobs")
    kinds = np.array([0] * n_swaps + [1] * n_interchanges)
    rng.shuffle(kinds)
    for kind in kinds:
        if kind == 0:
            i = int(rng.integers(n - 1))
            j = i + 1
        else:
            i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        out[i], out[j] = out[j], out[i]
    return out


def format_sequence(seq, cost: int) -> str:
    return " ".join(str(int(x)) for x in seq) + f"\nmakespan {int(cost)}\n"


class FspProblem:
    kind = "fsp"

    def __init__(self, inst: FspInstance):
        self.instance = inst

    @property
    def n(self) -> int:
        return self.instance.n_jobs

    @property
    def name(self) -> str:
        return self.instance.name

    @property
    def best_known(self):
        return self.instance.best_known

    def evaluate(self, seq) -> int:
        seq = np.asarray(seq)
        if len(seq) != self.n or not is_permutation(seq):
            raise ValidationError(f"sequence must be a permutation of 0..{self.n - 1}")
        return makespan(self.instance, seq)

    def format_solution(self, sol: Solution) -> str:
        return format_sequence(sol.perm, sol.cost)

    def brute_force(self):
        from ilsbench.bench.oracle import brute_force_fsp

        return brute_force_fsp(self.instance)

    def components(
        self,
        acceptance=None,
        perturbation: str = "swap-interchange",
        n_swaps: int = 2,
        n_interchanges: int = 2,
        initial: str = "neh",
        accelerated: bool = True,
    ) -> Components:
        """ILS parts; acceptance defaults to ConstTemp at the instance-scaled temperature."""
        inst = self.instance
        if acceptance is None:
            acceptance = ConstTemp(inst.default_temperature())
        elif isinstance(acceptance, str):
            acceptance = make_acceptance(acceptance, default_temperature=inst.default_temperature())
        if perturbation == "swap-interchange":
            if n_swaps < 0 or n_interchanges < 0 or n_swaps + n_interchanges == 0:
                raise ConfigError(f"invalid move counts ({n_swaps}, {n_interchanges})")

            def perturb(s, history, rng):
                seq = fsp_perturb(s.perm, n_swaps, n_interchanges, rng)
                return Solution(seq, makespan(inst, seq))

        elif perturbation == "random-restart":

            def perturb(s, history, rng):
                return random_sequence(inst, rng)

        else:
            raise ConfigError(f"unknown FSP perturbation {perturbation!r}")

        if initial == "neh":

            def init(rng):
                return neh(inst, accelerated)

        elif initial == "random":
            init = partial(random_sequence, inst)
        else:
            raise ConfigError(f"unknown FSP initial solution {initial!r}")

        return Components(
            initial=init,
            local_search=partial(local_search_insert, inst, accelerated=accelerated),
            perturbation=perturb,
            acceptance=acceptance,
            restart_sources={
                "random": partial(random_sequence, inst),
                "greedy": partial(randomized_neh, inst, accelerated=accelerated),
            },
            distance=lambda a, b: int(np.count_nonzero(np.asarray(a.perm) != np.asarray(b.perm))),
        )
