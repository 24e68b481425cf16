import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ilsbench import qap
from ilsbench.bench.instances import bundled
from ilsbench.core import Better, Solution, Termination, run_ils
from ilsbench.errors import ConfigError, ParameterError, ParseError, ValidationError

from conftest import naive_qap_cost


def test_parse_minimal(qap_tiny):
    inst = qap.parse_qaplib("2\n0 1\n1 0\n\n0 3\n3 0\n")
    assert inst.n == 2
    assert np.array_equal(inst.flow, qap_tiny.flow) and np.array_equal(inst.dist, qap_tiny.dist)


def test_parse_accepts_negative_entries():
    inst = qap.parse_qaplib("2  0 -1 -1 0   0 3 3 0")
    assert inst.flow[0, 1] == -1
    assert qap.qap_cost(inst, [0, 1]) == -6


@pytest.mark.parametrize("text", ["2 0 1 1 0 0 3 3", "2 0 1 1 0 0 3 3 0 9", "", "x 1", "1 1 a"])
def test_parse_rejects_bad_token_counts(text):
    with pytest.raises(ParseError):
        qap.parse_qaplib(text)


def test_bundled_fixture_matches_reread():
    path = bundled("kra30x.dat")
    inst = qap.parse_qaplib(path.read_bytes())
    tokens = [int(t) for t in path.read_text().split()]
    assert inst.n == tokens[0] == 30
    flow = np.array(tokens[1:901]).reshape(30, 30)
    dist = np.array(tokens[901:]).reshape(30, 30)
    assert int(inst.flow.sum()) == int(flow.sum()) and np.array_equal(inst.flow, flow)
    assert int(inst.dist.sum()) == int(dist.sum()) and np.array_equal(inst.dist, dist)


def test_format_roundtrip(rng):
    inst = qap.random_instance(9, rng)
    again = qap.parse_qaplib(qap.format_qaplib(inst))
    assert np.array_equal(inst.flow, again.flow) and np.array_equal(inst.dist, again.dist)


def test_cost_examples(qap_tiny):
    assert qap.qap_cost(qap_tiny, [0, 1]) == 6
    zero = qap.QapInstance("z", np.zeros((5, 5)), np.arange(25).reshape(5, 5))
    for p in itertools.permutations(range(5)):
        assert qap.qap_cost(zero, p) == 0


def test_cost_matches_naive(rng):
    for _ in range(200):
        inst = qap.random_instance(int(rng.integers(1, 12)), rng, high=50)
        p = rng.permutation(inst.n)
        assert qap.qap_cost(inst, p) == naive_qap_cost(inst.flow, inst.dist, p)


def test_exhaustive_minimum_matches_oracle(rng):
    inst = qap.random_instance(6, rng)
    best = min(naive_qap_cost(inst.flow, inst.dist, p) for p in itertools.permutations(range(6)))
    cost, sol = qap.QapProblem(inst).brute_force()
    assert cost == best == qap.qap_cost(inst, sol.perm)


def test_swap_delta_matches_naive_10k():
    rng = np.random.default_rng(10)
    for trial in range(10_000):
        if trial % 100 == 0:
            n = int(rng.integers(2, 15))
            inst = qap.random_instance(n, rng, high=40)
            # asymmetric with non-zero diagonals and some negative entries
            inst = qap.QapInstance("r", inst.flow - 10, inst.dist)
        p = rng.permutation(n)
        i, j = (int(x) for x in rng.integers(0, n, size=2))
        q = p.copy()
        q[i], q[j] = q[j], q[i]
        expect = naive_qap_cost(inst.flow, inst.dist, q) - naive_qap_cost(inst.flow, inst.dist, p)
        assert qap.swap_delta(inst, p, i, j) == expect


def test_swap_delta_same_item_is_zero(rng):
    inst = qap.random_instance(5, rng)
    assert qap.swap_delta(inst, rng.permutation(5), 3, 3) == 0


def test_swap_then_swap_back(rng):
    inst = qap.random_instance(8, rng)
    p = rng.permutation(8)
    q = p.copy()
    q[2], q[5] = q[5], q[2]
    assert qap.swap_delta(inst, p, 2, 5) + qap.swap_delta(inst, q, 2, 5) == 0


def test_symmetric_hand_case():
    a = np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    b = np.array([[0, 4, 5], [4, 0, 6], [5, 6, 0]])
    inst = qap.QapInstance("h", a, b)
    assert qap.qap_cost(inst, [0, 1, 2]) == 64
    assert qap.qap_cost(inst, [1, 0, 2]) == 62
    # 2 * (a20 - a21) * (b[p2, p1] - b[p2, p0]) = 2 * (2 - 3) * (6 - 5)
    assert qap.swap_delta(inst, [0, 1, 2], 0, 1) == -2


def test_local_search_two_items(qap_tiny):
    inst = qap.QapInstance("t", np.array([[0, 5], [1, 0]]), np.array([[0, 1], [7, 0]]))
    for p in ([0, 1], [1, 0]):
        out = qap.local_search_qap(inst, Solution(np.array(p), qap.qap_cost(inst, p)))
        assert out.cost == min(qap.qap_cost(inst, [0, 1]), qap.qap_cost(inst, [1, 0]))


def test_local_search_is_swap_optimal_and_idempotent(rng):
    for _ in range(50):
        inst = qap.random_instance(12, rng)
        start = qap.random_assignment(inst, rng)
        out = qap.local_search_qap(inst, start)
        assert out.cost <= start.cost
        assert out.cost == qap.qap_cost(inst, out.perm)
        assert out.is_permutation()
        for i in range(12):
            for j in range(i + 1, 12):
                assert qap.swap_delta(inst, out.perm, i, j) >= 0
        again = qap.local_search_qap(inst, out)
        assert np.array_equal(again.perm, out.perm) and again.cost == out.cost


def test_local_optima_vs_oracle():
    rng = np.random.default_rng(77)
    hits = 0
    for _ in range(30):
        inst = qap.random_instance(7, rng)
        opt, _ = qap.QapProblem(inst).brute_force()
        out = qap.local_search_qap(inst, qap.random_assignment(inst, rng))
        assert out.cost >= opt
        hits += out.cost == opt
    assert hits > 0


def test_k_exchange_two_is_a_swap(rng):
    p = rng.permutation(10)
    q = qap.k_exchange(p, 2, rng)
    (i, j) = np.flatnonzero(p != q)
    assert q[i] == p[j] and q[j] == p[i]


def test_k_exchange_changes_exactly_k_10k():
    rng = np.random.default_rng(12)
    for _ in range(10_000):
        n = int(rng.integers(2, 40))
        k = int(rng.integers(2, n + 1))
        p = rng.permutation(n)
        q = qap.k_exchange(p, k, rng)
        assert qap.hamming(p, q) == k
        assert sorted(q.tolist()) == list(range(n))


def test_k_equal_n_moves_every_item(rng):
    p = rng.permutation(30)
    assert np.all(qap.k_exchange(p, 30, rng) != p)


def test_derangement_is_uniform():
    rng = np.random.default_rng(3)
    counts = {}
    for _ in range(9000):
        d = tuple(qap.random_derangement(4, rng).tolist())
        counts[d] = counts.get(d, 0) + 1
    assert len(counts) == 9  # derangements of 4 elements
    assert max(counts.values()) / min(counts.values()) < 1.2


def test_plain_shuffle_allows_fixed_points():
    rng = np.random.default_rng(4)
    p = np.arange(20)
    changed = [qap.hamming(p, qap.k_exchange(p, 5, rng, derangement=False)) for _ in range(500)]
    assert min(changed) < 5 and max(changed) <= 5


@pytest.mark.parametrize("k", [0, 1, 11])
def test_k_exchange_bounds(k, rng):
    with pytest.raises(ParameterError):
        qap.k_exchange(np.arange(10), k, rng)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**32 - 1))
def test_kick_then_descent_stays_a_permutation(n, seed):
    rng = np.random.default_rng(seed)
    inst = qap.random_instance(n, rng, high=20)
    s = qap.local_search_qap(inst, qap.random_assignment(inst, rng))
    p = qap.k_exchange(s.perm, int(rng.integers(2, n + 1)), rng)
    out = qap.local_search_qap(inst, Solution(p, qap.qap_cost(inst, p)))
    assert out.is_permutation() and out.cost == qap.qap_cost(inst, out.perm)


def test_greedy_assignment_is_valid_and_useful(rng):
    inst = qap.parse_qaplib(bundled("kra30x.dat").read_bytes())
    greedy = [qap.greedy_assignment(inst, rng).cost for _ in range(20)]
    rand = [qap.random_assignment(inst, rng).cost for _ in range(20)]
    assert np.mean(greedy) < np.mean(rand)


def test_problem_validation_and_format(qap_tiny):
    p = qap.QapProblem(qap_tiny)
    assert p.evaluate([1, 0]) == 6
    with pytest.raises(ValidationError):
        p.evaluate([0, 0])
    assert p.format_solution(Solution(np.array([0, 1]), 6)) == "0 1\ncost 6\n"


def test_components_reject_bad_options(rng):
    p = qap.QapProblem(qap.random_instance(6, rng))
    for kw in ({"strength": 1}, {"strength": 7}, {"perturbation": "swap"}, {"initial": "neh"}):
        with pytest.raises(ConfigError):
            p.components(**kw)


def test_ils_on_tiny_instances_finds_optimum():
    rng = np.random.default_rng(5)
    for seed in range(10):
        inst = qap.random_instance(7, rng)
        p = qap.QapProblem(inst)
        opt, _ = p.brute_force()
        rec = run_ils(p, p.components(Better(), strength=3), Termination(max_iterations=300), seed)
        assert rec.best_cost == opt
