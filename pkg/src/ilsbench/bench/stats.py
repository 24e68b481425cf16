"""Two-sample location test for comparing best-cost distributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import mannwhitneyu


@dataclass(frozen=True)
class LocationTest:
    statistic: float
    p_value: float
    alpha: float

    @property
    def rejects(self) -> bool:
        return self.p_value < self.alpha


def location_test(a, b, alpha: float = 0.01) -> LocationTest:
    """Two-sided Mann-Whitney U test; identical constant samples never reject."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.all(a == a[0]) and np.all(b == a[0]):
        return LocationTest(float(len(a) * len(b)) / 2, 1.0, alpha)
    res = mannwhitneyu(a, b, alternative="two-sided")
    return LocationTest(float(res.statistic), float(res.pvalue), alpha)
