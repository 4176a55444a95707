"""
Pairwise chi-square dependency tests with degrees of freedom
reduced by the values never observed in the sample.
"""
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2 as chi2_dist

# 99% critical values, exact table used for small degrees of freedom
THRESHOLDS_99 = {1: 6.63, 2: 9.21, 3: 11.34, 4: 13.28}


@dataclass(frozen=True)
class ChiSquareResult:
    chi2: float
    dof: int
    significant: bool


def threshold(dof: int, confidence: float = 0.99) -> float:
    """Critical chi-square value for the degrees of freedom"""
    if dof <= 0:
        return float("inf")
    if confidence == 0.99 and dof in THRESHOLDS_99:
        return THRESHOLDS_99[dof]
    return float(chi2_dist.ppf(confidence, dof))


def contingency(x: np.ndarray, y: np.ndarray, di: int, dj: int) -> np.ndarray:
    counts = np.zeros((di, dj), dtype=np.float64)
    np.add.at(counts, (x, y), 1)
    return counts


def chi_square(
    samples: np.ndarray,
    i: int,
    j: int,
    domain_sizes,
    confidence: float = 0.99,
    adaptive_dof: bool = True,
) -> ChiSquareResult:
    """
    Chi-square statistic between columns i and j of the samples.
    Cells whose expected count is zero contribute nothing.
    With adaptive_dof the degrees of freedom drop by one
    for every value of either variable missing from the sample.
    """
    if i > j:
        i, j = j, i
    n = samples.shape[0]
    di, dj = int(domain_sizes[i]), int(domain_sizes[j])
    counts = contingency(samples[:, i], samples[:, j], di, dj)
    pi = counts.sum(axis=1) / n
    pj = counts.sum(axis=0) / n
    expected = n * np.outer(pi, pj)
    mask = expected > 0
    value = float((((counts - expected) ** 2)[mask] / expected[mask]).sum())
    dof = (di - 1) * (dj - 1)
    if adaptive_dof:
        dof -= int((pi == 0).sum() + (pj == 0).sum())
    significant = dof > 0 and value >= threshold(dof, confidence)
    return ChiSquareResult(value, dof, significant)
