import math

import numpy as np

from .core import ConfigError, Population


def truncation_size(n: int, rate: float) -> int:
    if not 0 < rate <= 1:
        raise ConfigError("Truncation rate must be in (0, 1], got %r" % rate)
    # round first so 0.2 * 100 stays 20
    return max(1, math.ceil(round(rate * n, 9)))


def truncation_indices(fitnesses: np.ndarray, rate: float) -> np.ndarray:
    """Indices of the best ceil(rate * n) fitnesses, earlier index wins ties"""
    k = truncation_size(len(fitnesses), rate)
    return np.argsort(fitnesses, kind="stable")[:k]


def select_truncation(pop: Population, rate: float) -> Population:
    """Lowest-fitness part of an evaluated population"""
    if not pop.evaluated:
        raise ConfigError("Population has to be evaluated before selection")
    return pop.subset(truncation_indices(pop.fitnesses, rate))
