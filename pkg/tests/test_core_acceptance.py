import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ilsbench.core import (
    LSMC,
    Better,
    ConstTemp,
    DistanceEscape,
    RandomWalk,
    Restart,
    SearchHistory,
    Solution,
    accept,
    make_acceptance,
    metropolis_probability,
)
from ilsbench.errors import ParameterError


def sol(cost, tag=0):
    return Solution(np.array([tag, 1 - tag]), cost)


def test_better_takes_strict_improvement():
    cur, cand = sol(100), sol(90, 1)
    assert accept(Better(), cur, cand, SearchHistory(), np.random.default_rng(0)) is cand


def test_better_rejects_tie():
    cur, cand = sol(100), sol(100, 1)
    assert accept(Better(), cur, cand, SearchHistory(), np.random.default_rng(0)) is cur


def test_random_walk_always_moves():
    cur, cand = sol(10), sol(1000, 1)
    assert accept(RandomWalk(), cur, cand, SearchHistory(), np.random.default_rng(0)) is cand


def test_consttemp_empirical_rate():
    crit = ConstTemp(2.0)
    cur, cand = sol(10), sol(12, 1)
    rng = np.random.default_rng(7)
    hist = SearchHistory()
    hits = sum(accept(crit, cur, cand, hist, rng) is cand for _ in range(100_000))
    assert metropolis_probability(10, 12, 2.0) == pytest.approx(math.exp(-1))
    assert abs(hits / 100_000 - math.exp(-1)) <= 0.01


def test_restart_fires_after_patience():
    crit = Restart(patience=5)
    fresh = sol(500, 1)
    hist = SearchHistory(iteration=16, last_improvement=10)  # i - i_last = i_r + 1
    out = accept(crit, sol(100), sol(120, 1), hist, np.random.default_rng(0), restart=lambda: fresh)
    assert out is fresh


def test_restart_waits_at_patience_boundary():
    crit = Restart(patience=5)
    hist = SearchHistory(iteration=15, last_improvement=10)
    cur = sol(100)
    out = accept(crit, cur, sol(120, 1), hist, np.random.default_rng(0), restart=lambda: sol(1))
    assert out is cur


def test_restart_prefers_improvement_even_when_stale():
    hist = SearchHistory(iteration=100, last_improvement=0)
    cand = sol(50, 1)
    out = accept(Restart(1), sol(100), cand, hist, np.random.default_rng(0), restart=lambda: sol(1))
    assert out is cand


def reference(kind, params, c_cur, c_cand, i, i_last, u):
    """Direct transcription of the acceptance rules, with ``u`` the uniform draw."""
    if kind == "better":
        return "cand" if c_cand < c_cur else "cur"
    if kind == "rw":
        return "cand"
    if kind == "lsmc":
        if c_cand < c_cur:
            return "cand"
        return "cand" if u < math.exp((c_cur - c_cand) / params["T"]) else "cur"
    if kind == "restart":
        if c_cand < c_cur:
            return "cand"
        if i - i_last > params["i_r"]:
            return "restart"
        return "cur"
    raise AssertionError(kind)


def test_accept_matches_transcription_10k():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        kind = rng.choice(["better", "rw", "lsmc", "restart"])
        c_cur, c_cand = (int(x) for x in rng.integers(0, 50, size=2))
        i_last = int(rng.integers(0, 50))
        i = i_last + int(rng.integers(0, 20))
        params = {"T": float(rng.uniform(0.1, 20)), "i_r": int(rng.integers(1, 15))}
        crit = {
            "better": Better(),
            "rw": RandomWalk(),
            "lsmc": LSMC(params["T"]),
            "restart": Restart(params["i_r"]),
        }[kind]
        seed = int(rng.integers(2**32))
        u = np.random.default_rng(seed).random()
        cur, cand, fresh = sol(c_cur), sol(c_cand, 1), sol(-1)
        hist = SearchHistory(iteration=i, last_improvement=i_last)
        out = accept(crit, cur, cand, hist, np.random.default_rng(seed), restart=lambda: fresh)
        got = {id(cur): "cur", id(cand): "cand", id(fresh): "restart"}[id(out)]
        assert got == reference(kind, params, c_cur, c_cand, i, i_last, u)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=1, max_size=40), st.integers(0, 2**32 - 1))
def test_lsmc_cold_limit_equals_better(pairs, seed):
    # without ties: an equal-cost candidate is accepted by the Metropolis rule at any T
    pairs = [(a, b) for a, b in pairs if a != b]
    cold, better = LSMC(1e-9), Better()
    rng = np.random.default_rng(seed)
    for a, b in pairs:
        cur, cand = sol(a), sol(b, 1)
        assert accept(cold, cur, cand, SearchHistory(), rng) is accept(better, cur, cand, SearchHistory(), rng)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=1, max_size=40), st.integers(0, 2**32 - 1))
def test_lsmc_hot_limit_equals_random_walk(pairs, seed):
    hot = make_acceptance("lsmc", temperature="inf")
    rng = np.random.default_rng(seed)
    for a, b in pairs:
        cand = sol(b, 1)
        assert accept(hot, sol(a), cand, SearchHistory(), rng) is cand


def test_lsmc_uses_history_temperature():
    crit = LSMC(1000.0, cooling=0.5)
    hist = SearchHistory(temperature=1e-12)
    cur = sol(10)
    assert accept(crit, cur, sol(11, 1), hist, np.random.default_rng(0)) is cur


@pytest.mark.parametrize(
    "build",
    [
        lambda: LSMC(0),
        lambda: LSMC(-1.0),
        lambda: LSMC(1.0, cooling=0.0),
        lambda: LSMC(1.0, cooling=1.5),
        lambda: ConstTemp(1.0, cooling=0.9),
        lambda: Restart(0),
        lambda: Restart(3, source="magic"),
        lambda: DistanceEscape(copies=3, keep=1),
        lambda: DistanceEscape(copies=3, keep=4),
        lambda: DistanceEscape(min_distance=0),
        lambda: make_acceptance("simulated-annealing"),
        lambda: make_acceptance("lsmc"),
        lambda: make_acceptance("better", patience=3),
    ],
)
def test_invalid_parameters(build):
    with pytest.raises(ParameterError):
        build()


def test_make_acceptance_aliases():
    assert make_acceptance("RW") == RandomWalk()
    assert make_acceptance("random_walk") == RandomWalk()
    assert make_acceptance("ConstTemp", T=3) == ConstTemp(3.0)
    assert make_acceptance("consttemp", default_temperature=2.5) == ConstTemp(2.5)
    assert make_acceptance("restart", patience=4, source="greedy") == Restart(4, "greedy")
    assert make_acceptance("escape", copies=5, keep=2) == DistanceEscape(copies=5, keep=2)


def test_metropolis_limits():
    assert metropolis_probability(5, 3, 1.0) == 1.0
    assert metropolis_probability(5, 5, 1e-9) == 1.0
    assert metropolis_probability(5, 6, math.inf) == 1.0
    assert metropolis_probability(5, 6, 0.0) == 0.0
