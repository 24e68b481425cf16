"""Experiment harness: configs, multi-seed runs, oracles, reports."""

from ilsbench.bench.config import Combination, ExperimentConfig, config_from_dict, load_config, resolve_strength
from ilsbench.bench.experiment import build_components, run_experiment
from ilsbench.bench.instances import bundled, generate_instance, load_instance, make_problem
from ilsbench.bench.oracle import brute_force, brute_force_fsp, brute_force_qap, brute_force_tsp
from ilsbench.bench.report import (
    Report,
    ReportRow,
    aggregate,
    emit_report,
    read_runs,
    runs_to_jsonl,
    trajectory_capture,
)
from ilsbench.bench.stats import LocationTest, location_test

__all__ = [
    "Combination",
    "ExperimentConfig",
    "LocationTest",
    "Report",
    "ReportRow",
    "aggregate",
    "brute_force",
    "brute_force_fsp",
    "brute_force_qap",
    "brute_force_tsp",
    "build_components",
    "bundled",
    "config_from_dict",
    "emit_report",
    "generate_instance",
    "load_config",
    "load_instance",
    "location_test",
    "make_problem",
    "read_runs",
    "resolve_strength",
    "run_experiment",
    "runs_to_jsonl",
    "trajectory_capture",
]
