"""Bivariate probability model estimated from the selected solutions"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .chisquare import chi_square, contingency

log = logging.getLogger(__name__)


@dataclass
class DependencyStats:
    chi2: np.ndarray
    dof: np.ndarray
    significant: np.ndarray
    # running sums over all estimations of a run
    cumulative_chi2: np.ndarray
    ever_significant: np.ndarray

    @property
    def n(self) -> int:
        return self.chi2.shape[0]

    def significant_pairs(self) -> List[Tuple[int, int]]:
        idx = np.argwhere(np.triu(self.significant, k=1))
        return [(int(i), int(j)) for i, j in idx]

    def to_json(self) -> dict:
        return {
            "chi2": self.chi2.tolist(),
            "dof": self.dof.tolist(),
            "significant": self.significant.astype(int).tolist(),
            "cumulative_chi2": self.cumulative_chi2.tolist(),
        }


@dataclass
class ProbabilityModel:
    domain_sizes: np.ndarray
    marginals: List[np.ndarray]
    # most dependent partner of every variable, -1 for none
    neighbors: np.ndarray
    # rows p(x_i | x_neighbor = r), None without a neighbor
    conditionals: List[Optional[np.ndarray]]
    observed_rows: List[Optional[np.ndarray]]
    # joint counts of significant pairs (i < j)
    pair_counts: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.marginals)

    def conditional(self, child: int, parent: int) -> np.ndarray:
        """p(x_child | x_parent) rows from the pair counts, marginal for unseen rows"""
        if child < parent:
            counts = self.pair_counts[(child, parent)].T
        else:
            counts = self.pair_counts[(parent, child)]
        return conditional_rows(counts, self.marginals[child])[0]

    def to_json(self) -> dict:
        return {
            "domain_sizes": self.domain_sizes.tolist(),
            "marginals": [m.tolist() for m in self.marginals],
            "neighbors": self.neighbors.tolist(),
            "conditionals": [None if c is None else c.tolist() for c in self.conditionals],
        }

    def mode(self, i: int) -> Tuple[int, float]:
        """Most probable code of a variable, lowest code on ties"""
        m = self.marginals[i]
        k = int(np.argmax(m))
        return k, float(m[k])


def conditional_rows(counts: np.ndarray, fallback: np.ndarray):
    """Normalizes rows of a parent x child count table"""
    totals = counts.sum(axis=1)
    observed = totals > 0
    rows = np.tile(fallback, (counts.shape[0], 1))
    rows[observed] = counts[observed] / totals[observed, None]
    return rows, observed


def marginal_table(samples: np.ndarray, i: int, size: int) -> np.ndarray:
    counts = np.bincount(samples[:, i], minlength=size).astype(np.float64)
    return counts / counts.sum()


def estimate_model(
    samples: np.ndarray,
    domain_sizes,
    confidence: float = 0.99,
    adaptive_dof: bool = True,
    previous: Optional[DependencyStats] = None,
) -> Tuple[ProbabilityModel, DependencyStats]:
    """
    Marginals, pairwise dependency tests and one-neighbor conditionals.
    `previous` carries the cumulative sums of earlier estimations.
    """
    samples = np.asarray(samples, dtype=np.int64)
    domain_sizes = np.asarray(domain_sizes, dtype=np.int64)
    n = samples.shape[1]
    chi2 = np.zeros((n, n))
    dof = np.zeros((n, n), dtype=np.int64)
    significant = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            res = chi_square(samples, i, j, domain_sizes, confidence, adaptive_dof)
            chi2[i, j] = chi2[j, i] = res.chi2
            dof[i, j] = dof[j, i] = res.dof
            significant[i, j] = significant[j, i] = res.significant
    if previous is None:
        cumulative = chi2.copy()
        ever = significant.copy()
    else:
        cumulative = previous.cumulative_chi2 + chi2
        ever = previous.ever_significant | significant
    stats = DependencyStats(chi2, dof, significant, cumulative, ever)

    marginals = [marginal_table(samples, i, domain_sizes[i]) for i in range(n)]
    neighbors = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        best = None
        for j in np.flatnonzero(significant[i]):
            # strict comparison keeps the lower index on ties
            if best is None or chi2[i, j] > chi2[i, best]:
                best = int(j)
        if best is not None:
            neighbors[i] = best

    conditionals = []
    observed_rows = []
    for i in range(n):
        nb = neighbors[i]
        if nb < 0:
            conditionals.append(None)
            observed_rows.append(None)
            continue
        counts = contingency(samples[:, nb], samples[:, i], domain_sizes[nb], domain_sizes[i])
        rows, observed = conditional_rows(counts, marginals[i])
        conditionals.append(rows)
        observed_rows.append(observed)

    pair_counts = {
        (i, j): contingency(samples[:, i], samples[:, j], domain_sizes[i], domain_sizes[j])
        for i, j in stats.significant_pairs()
    }
    model = ProbabilityModel(domain_sizes, marginals, neighbors, conditionals, observed_rows, pair_counts)
    log.debug(
        "Model from %d samples: %d significant pairs", samples.shape[0], len(pair_counts)
    )
    return model, stats


def independent_model(domain_sizes) -> ProbabilityModel:
    """Uniform marginals, no dependencies"""
    domain_sizes = np.asarray(domain_sizes, dtype=np.int64)
    n = len(domain_sizes)
    return ProbabilityModel(
        domain_sizes,
        [np.full(d, 1.0 / d) for d in domain_sizes],
        np.full(n, -1, dtype=np.int64),
        [None] * n,
        [None] * n,
    )
