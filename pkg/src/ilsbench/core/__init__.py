"""Problem-agnostic iterated local search engine."""

from ilsbench.core.acceptance import (
    LSMC,
    AcceptanceCriterion,
    Better,
    ConstTemp,
    DistanceEscape,
    RandomWalk,
    Restart,
    accept,
    acceptance_parameters,
    make_acceptance,
)
from ilsbench.core.engine import Components, check_components, run_ils
from ilsbench.core.escape import EscapeResult, escape_beyond_distance
from ilsbench.core.solution import (
    RunRecord,
    SearchHistory,
    Solution,
    Termination,
    Trace,
    is_permutation,
    metropolis_probability,
    rng_streams,
)

__all__ = [
    "LSMC",
    "AcceptanceCriterion",
    "Better",
    "Components",
    "ConstTemp",
    "DistanceEscape",
    "EscapeResult",
    "RandomWalk",
    "Restart",
    "RunRecord",
    "SearchHistory",
    "Solution",
    "Termination",
    "Trace",
    "accept",
    "acceptance_parameters",
    "check_components",
    "escape_beyond_distance",
    "is_permutation",
    "make_acceptance",
    "metropolis_probability",
    "rng_streams",
    "run_ils",
]
