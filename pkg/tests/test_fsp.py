import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ilsbench import fsp
from ilsbench.bench.instances import bundled
from ilsbench.core import Solution
from ilsbench.errors import ConfigError, ParameterError, ParseError, ValidationError

from conftest import simulate_flow_shop


def rand_inst(n, m, rng, high=50):
    return fsp.FspInstance("r", rng.integers(0, high, size=(n, m)))


def test_makespan_hand_trace(fsp_2x2):
    assert fsp.makespan(fsp_2x2, [0, 1]) == 9
    assert fsp.makespan(fsp_2x2, [1, 0]) == 8


def test_single_machine_is_sum(rng):
    inst = rand_inst(7, 1, rng)
    total = int(inst.proc.sum())
    for _ in range(20):
        assert fsp.makespan(inst, rng.permutation(7)) == total


def test_makespan_matches_event_simulation():
    rng = np.random.default_rng(31)
    for _ in range(2000):
        inst = rand_inst(int(rng.integers(1, 9)), int(rng.integers(1, 6)), rng, high=int(rng.integers(1, 30)))
        seq = rng.permutation(inst.n_jobs)
        assert fsp.makespan(inst, seq) == simulate_flow_shop(inst.proc.tolist(), seq.tolist())


def test_parse_layouts():
    mm = fsp.parse_taillard("2 3\n1 2\n3 4\n5 6\n")
    assert mm.proc.tolist() == [[1, 3, 5], [2, 4, 6]]
    jm = fsp.parse_taillard("2 3\n1 2 3\n4 5 6\n", layout="job-major")
    assert jm.proc.tolist() == [[1, 2, 3], [4, 5, 6]]


def test_parse_taillard_annotated_file():
    text = """number of jobs, number of machines, initial seed, upper bound and lower bound :
          3           2   873654221        99        90
processing times :
  5  1  7
  2  8  3
"""
    inst = fsp.parse_taillard(text)
    assert inst.proc.tolist() == [[5, 2], [1, 8], [7, 3]]


def test_parse_errors():
    with pytest.raises(ParseError, match="line 3"):
        fsp.parse_taillard("2 2\n1 2\n3\n")
    with pytest.raises(ParseError):
        fsp.parse_taillard("2\n1 2\n")
    with pytest.raises(ParseError):
        fsp.parse_taillard("no numbers here")
    with pytest.raises(ParameterError):
        fsp.parse_taillard("1 1\n1\n", layout="diagonal")
    with pytest.raises(ParseError):
        fsp.FspInstance("neg", np.array([[1, -1]]))


def test_format_roundtrip(rng):
    inst = rand_inst(9, 4, rng)
    assert np.array_equal(fsp.parse_taillard(fsp.format_taillard(inst)).proc, inst.proc)


def test_taillard_generator_first_instance_row():
    # first row of Taillard's ta001 (20 jobs x 5 machines, seed 873654221)
    inst = fsp.taillard_instance(20, 5, 873654221)
    assert inst.proc[:, 0].tolist() == [54, 83, 15, 71, 77, 36, 53, 38, 27, 87, 76, 91, 14, 29, 12, 77, 32, 87, 68, 94]


def test_bundled_fixture():
    inst = fsp.parse_taillard(bundled("tai50x20.fsp").read_bytes())
    assert (inst.n_jobs, inst.n_machines) == (50, 20)
    assert inst.proc.min() >= 1 and inst.proc.max() <= 99
    assert np.array_equal(inst.proc, fsp.taillard_instance(50, 20, 1328042058).proc)


def test_neh_small_cases(fsp_2x2):
    assert fsp.neh(fsp.FspInstance("one", np.array([[4, 2, 7]]))).perm.tolist() == [0]
    assert fsp.neh(fsp_2x2).cost == 8


def test_neh_between_optimum_and_worst():
    rng = np.random.default_rng(73)
    for _ in range(10):
        inst = rand_inst(7, 3, rng)
        spans = [fsp.makespan(inst, p) for p in itertools.permutations(range(7))]
        s = fsp.neh(inst)
        assert min(spans) <= s.cost <= max(spans)
        assert s.cost == fsp.makespan(inst, s.perm)


def test_neh_tie_breaking():
    # all totals equal: insertion order is job index; each new job goes to the earliest best slot
    inst = fsp.FspInstance("flat", np.ones((4, 3), dtype=int))
    assert fsp.neh(inst).perm.tolist() == [3, 2, 1, 0]


def test_neh_is_deterministic_and_acceleration_free(rng):
    inst = rand_inst(40, 10, rng, high=99)
    a, b, c = fsp.neh(inst), fsp.neh(inst), fsp.neh(inst, accelerated=False)
    assert np.array_equal(a.perm, b.perm) and np.array_equal(a.perm, c.perm)


def test_accelerated_insertion_costs_are_exact():
    rng = np.random.default_rng(17)
    for _ in range(500):
        n, m = int(rng.integers(1, 12)), int(rng.integers(1, 7))
        inst = rand_inst(n + 1, m, rng, high=int(rng.integers(1, 40)))
        partial = rng.permutation(n + 1)
        job, partial = partial[0], partial[1:]
        fast = fsp._insert_costs(inst.proc, partial.astype(np.int64), job, True)
        slow = fsp._insert_costs(inst.proc, partial.astype(np.int64), job, False)
        brute = [fsp.makespan(inst, np.insert(partial, k, job)) for k in range(n + 1)]
        assert fast.tolist() == slow.tolist() == brute


def insert_neighbours(seq):
    for i in range(len(seq)):
        rest = np.delete(seq, i)
        for j in range(len(seq)):
            if j != i:
                yield np.insert(rest, j, seq[i])


def test_insert_descent_two_jobs(fsp_2x2):
    out = fsp.local_search_insert(fsp_2x2, Solution(np.array([0, 1]), 9))
    assert out.cost == 8 and out.perm.tolist() == [1, 0]


@pytest.mark.parametrize("accelerated", [True, False])
def test_insert_descent_local_optimality(accelerated):
    rng = np.random.default_rng(5)
    for _ in range(20):
        inst = rand_inst(10, 4, rng)
        start = fsp.random_sequence(inst, rng)
        out = fsp.local_search_insert(inst, start, accelerated=accelerated)
        assert out.cost <= start.cost and out.cost == fsp.makespan(inst, out.perm)
        assert all(fsp.makespan(inst, q) >= out.cost for q in insert_neighbours(out.perm))
        again = fsp.local_search_insert(inst, out, accelerated=accelerated)
        assert np.array_equal(again.perm, out.perm)


def test_acceleration_never_changes_the_descent(rng):
    inst = rand_inst(30, 8, rng, high=99)
    for _ in range(10):
        start = fsp.random_sequence(inst, rng)
        a = fsp.local_search_insert(inst, start, accelerated=True)
        b = fsp.local_search_insert(inst, start, accelerated=False)
        assert np.array_equal(a.perm, b.perm)


def test_descent_from_neh_between_optimum_and_neh():
    rng = np.random.default_rng(19)
    for _ in range(10):
        inst = rand_inst(7, 3, rng)
        opt = min(fsp.makespan(inst, p) for p in itertools.permutations(range(7)))
        s = fsp.neh(inst)
        out = fsp.local_search_insert(inst, s)
        assert opt <= out.cost <= s.cost


def test_perturb_single_adjacent_swap():
    rng = np.random.default_rng(0)
    seen = {tuple(fsp.fsp_perturb([0, 1, 2], 1, 0, rng).tolist()) for _ in range(200)}
    assert seen == {(1, 0, 2), (0, 2, 1)}


def test_perturb_single_interchange_is_one_transposition(rng):
    for _ in range(200):
        p = rng.permutation(12)
        q = fsp.fsp_perturb(p, 0, 1, rng)
        assert np.count_nonzero(p != q) == 2


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 30), st.integers(0, 4), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_perturb_keeps_a_permutation(n, swaps, inter, seed):
    if swaps + inter == 0:
        return
    rng = np.random.default_rng(seed)
    out = fsp.fsp_perturb(rng.permutation(n), swaps, inter, rng)
    assert sorted(out.tolist()) == list(range(n))


@pytest.mark.parametrize("counts", [(0, 0), (-1, 2), (2, -1)])
def test_perturb_rejects_bad_counts(counts, rng):
    with pytest.raises(ParameterError):
        fsp.fsp_perturb(np.arange(5), *counts, rng)


def test_default_temperature():
    inst = fsp.FspInstance("t", np.array([[10, 20], [30, 40]]))
    assert inst.default_temperature() == pytest.approx(100 / 40)


def test_problem_api(fsp_2x2):
    p = fsp.FspProblem(fsp_2x2)
    assert p.evaluate([1, 0]) == 8
    with pytest.raises(ValidationError):
        p.evaluate([1, 1])
    assert p.format_solution(Solution(np.array([1, 0]), 8)) == "1 0\nmakespan 8\n"
    with pytest.raises(ConfigError):
        p.components(n_swaps=0, n_interchanges=0)
    with pytest.raises(ConfigError):
        p.components(initial="greedy-ish")
