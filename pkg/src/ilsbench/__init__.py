"""Iterated local search for TSP, QAP and permutation flow shop, with a benchmark harness."""

__version__ = "0.1.0"
