"""
Benchmark functions with known structure, all minimized.
A gene counts as set when its value is 1.
"""
from typing import List, Tuple

import rng
from .core import Evaluator, FitnessError


def trap_pair(a: int, b: int) -> int:
    """Both set is best, none set second, one set worst"""
    u = int(a == 1) + int(b == 1)
    return {2: -2, 0: -1, 1: 0}[u]


class OneMax(Evaluator):
    ID = "onemax"
    LABEL = "OneMax"

    def __call__(self, s):
        return -float(sum(1 for v in s.values if v == 1))

    def optimum(self):
        return -float(self.spec.n_variables)


class TrapPairs(Evaluator):
    """Two-gene traps on consecutive genes, an odd last gene is ignored"""

    ID = "trap-pairs"
    LABEL = "TrapPairs"

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        n = self.spec.n_variables
        return [(k, k + 1) for k in range(0, n - 1, 2)]

    def __call__(self, s):
        return float(sum(trap_pair(s.values[i], s.values[j]) for i, j in self.pairs))

    def optimum(self):
        return -2.0 * len(self.pairs)


class PlantedPairs(TrapPairs):
    """Two-gene traps over a hidden random pairing of the genes"""

    ID = "planted-pairs"
    LABEL = "PlantedPairs"

    def __init__(self, spec, params=None):
        super().__init__(spec, params)
        seed = int(self.params.get("pairing_seed", 0))
        order = rng.generator(seed, "planted-pairs").permutation(spec.n_variables)
        self._pairs = [
            tuple(sorted((int(order[k]), int(order[k + 1]))))
            for k in range(0, len(order) - 1, 2)
        ]

    @property
    def pairs(self):
        return list(self._pairs)


EVALUATORS = [OneMax, TrapPairs, PlantedPairs]


def fitness_synthetic(kind: str, spec, s, params=None) -> float:
    """Fitness of s under the benchmark named by its id or label"""
    for cls in EVALUATORS:
        if kind in (cls.ID, cls.LABEL):
            return cls(spec, params)(s)
    raise FitnessError("Unknown synthetic function %r" % kind)
