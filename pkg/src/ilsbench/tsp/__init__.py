"""Symmetric TSP: instances, tours, descent, kicks."""

from ilsbench.tsp.construct import greedy_edge_tour, nearest_neighbor_tour, random_tour, randomized_nearest_neighbor
from ilsbench.tsp.instance import (
    TspInstance,
    candidate_lists,
    format_tsplib,
    from_coords,
    from_matrix,
    parse_tsplib,
    random_euclidean,
)
from ilsbench.tsp.localsearch import local_search_2opt, local_search_3opt, tour_length
from ilsbench.tsp.perturb import (
    changed_cities,
    coordinate_noise_perturbation,
    double_bridge,
    double_bridge_order,
    k_double_bridge,
    reset_dont_look_after_perturbation,
)
from ilsbench.tsp.problem import TspProblem
from ilsbench.tsp.tour import edge_set, format_tour, tour_distance, validate_tour

__all__ = [
    "TspInstance",
    "TspProblem",
    "candidate_lists",
    "changed_cities",
    "coordinate_noise_perturbation",
    "double_bridge",
    "double_bridge_order",
    "edge_set",
    "format_tour",
    "format_tsplib",
    "from_coords",
    "from_matrix",
    "greedy_edge_tour",
    "k_double_bridge",
    "local_search_2opt",
    "local_search_3opt",
    "nearest_neighbor_tour",
    "parse_tsplib",
    "random_euclidean",
    "random_tour",
    "randomized_nearest_neighbor",
    "reset_dont_look_after_perturbation",
    "tour_distance",
    "tour_length",
    "validate_tour",
]
