from __future__ import annotations

from functools import partial

import numpy as np

from ilsbench.core import Better, Components, Solution, make_acceptance
from ilsbench.errors import ConfigError, DegenerateInstanceError
from ilsbench.tsp.construct import greedy_edge_tour, nearest_neighbor_tour, random_tour, randomized_nearest_neighbor
from ilsbench.tsp.localsearch import local_search_2opt, local_search_3opt, tour_length
from ilsbench.tsp.perturb import biased_cuts, coordinate_noise_perturbation, double_bridge, k_double_bridge
from ilsbench.tsp.tour import format_tour, tour_distance, validate_tour

LOCAL_SEARCHES = {"2opt": local_search_2opt, "3opt": local_search_3opt}
PERTURBATIONS = ("double-bridge", "biased-double-bridge", "noise", "random-restart")


class TspProblem:
    kind = "tsp"

    def __init__(self, inst):
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
        validate_tour(perm, self.n)
        return tour_length(self.instance, perm)

    def format_solution(self, sol: Solution) -> str:
        return format_tour(sol.perm, sol.cost)

    def brute_force(self):
        from ilsbench.bench.oracle import brute_force_tsp

        return brute_force_tsp(self.instance)

    def components(
        self,
        acceptance=None,
        local_search: str = "3opt",
        perturbation: str = "double-bridge",
        strength: float = 1,
        initial: str = "random",
        dlb_radius: int = 25,
        bias: int = 8,
    ) -> Components:
        """Assemble ILS components.

        ``strength`` is the number of simultaneous double-bridge kicks, or the
        noise magnitude (fraction of the mean nearest-neighbour distance) for
        ``perturbation="noise"``.
        """
        inst = self.instance
        if local_search not in LOCAL_SEARCHES:
            raise ConfigError(f"unknown TSP local search {local_search!r}; choose from {sorted(LOCAL_SEARCHES)}")
        ls = partial(LOCAL_SEARCHES[local_search], inst, radius=dlb_radius)
        if acceptance is None:
            acceptance = Better()
        elif isinstance(acceptance, str):
            acceptance = make_acceptance(acceptance)

        if perturbation in ("double-bridge", "biased-double-bridge") and self.n < 8:
            raise DegenerateInstanceError(f"double-bridge needs n >= 8, instance has n={self.n}")
        if perturbation == "double-bridge":
            k = int(strength)
            if k < 1:
                raise ConfigError(f"double-bridge strength must be >= 1, got {strength}")

            def perturb(s, history, rng):
                order, bp = k_double_bridge(s.perm, k, rng)
                return Solution(order, tour_length(inst, order), bp)

        elif perturbation == "biased-double-bridge":
            k = int(strength)

            def perturb(s, history, rng):
                order = s.perm
                points = []
                for _ in range(k):
                    order, bp = double_bridge(order, rng, biased_cuts(order, inst.neighbors, rng, bias))
                    points.append(bp)
                return Solution(order, tour_length(inst, order), np.unique(np.concatenate(points)))

        elif perturbation == "noise":
            if inst.coords is None:
                raise ConfigError("noise perturbation needs a coordinate (EUC_2D) instance")
            magnitude = float(strength)

            def perturb(s, history, rng):
                return coordinate_noise_perturbation(inst, s, magnitude, rng)

        elif perturbation == "random-restart":

            def perturb(s, history, rng):
                return random_tour(inst, rng)

        else:
            raise ConfigError(f"unknown TSP perturbation {perturbation!r}; choose from {PERTURBATIONS}")

        if initial == "random":
            init = partial(random_tour, inst)
        elif initial in ("nn", "nearest-neighbor"):
            def init(rng):
                return nearest_neighbor_tour(inst)
        elif initial == "greedy":
            def init(rng):
                return greedy_edge_tour(inst)
        else:
            raise ConfigError(f"unknown TSP initial solution {initial!r}")

        return Components(
            initial=init,
            local_search=ls,
            perturbation=perturb,
            acceptance=acceptance,
            restart_sources={"random": partial(random_tour, inst), "greedy": partial(randomized_nearest_neighbor, inst)},
            distance=lambda a, b: tour_distance(a.perm, b.perm),
        )
