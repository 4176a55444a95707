"""Base types of the optimizers"""
from dataclasses import asdict, dataclass, fields
from typing import List, Optional

import numpy as np

from assembly import Solution
from errors import BaseError
from workspace import config

ALGORITHMS = ("bmda-gs", "bmda", "ga")


class EdaError(BaseError):
    NAME = "Optimizer error"


class ConfigError(EdaError):
    NAME = "Config error"


class RunAborted(EdaError):
    NAME = "Run aborted"

    def __init__(self, msg, history=None):
        super().__init__(msg)
        # whatever was recorded before the failure
        self.history = history


def _rate(name, value, allow_zero=False):
    lo_ok = value >= 0 if allow_zero else value > 0
    if not (lo_ok and value <= 1):
        raise ConfigError("%s must be in %s, got %r" % (name, "[0, 1]" if allow_zero else "(0, 1]", value))


@dataclass
class AlgoConfig:
    algorithm: str = "bmda-gs"
    population_size: int = 100
    truncation_rate: float = 0.2
    confidence_level: float = 0.99
    gibbs_sweep_multiplier: int = 1000
    ga_crossover_rate: float = 0.9
    ga_mutation_rate: float = 0.1
    ga_truncation_rate: float = 0.6
    iteration_budget: int = 10
    stagnation_window: Optional[int] = None
    seed: int = 0
    elitism: bool = True
    repair: bool = True
    cache_fitness: bool = True
    jobs: Optional[int] = None
    # log the CP search tree of every repair
    trace_cp: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                "unsupported algorithm %r, use one of %s" % (self.algorithm, ", ".join(ALGORITHMS))
            )
        if self.population_size < 2:
            raise ConfigError("Population size must be at least 2")
        _rate("Truncation rate", self.truncation_rate)
        _rate("GA truncation rate", self.ga_truncation_rate)
        _rate("Crossover rate", self.ga_crossover_rate, allow_zero=True)
        _rate("Mutation rate", self.ga_mutation_rate, allow_zero=True)
        if not 0 < self.confidence_level < 1:
            raise ConfigError("Confidence level must be in (0, 1)")
        if self.gibbs_sweep_multiplier < 1:
            raise ConfigError("Gibbs sweep multiplier must be positive")
        if self.iteration_budget < 0:
            raise ConfigError("Iteration budget can't be negative")
        if self.stagnation_window is not None and self.stagnation_window < 1:
            raise ConfigError("Stagnation window must be positive")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError("Number of jobs must be positive")

    @classmethod
    def from_defaults(cls, **overrides) -> "AlgoConfig":
        """Defaults from the config module, then overrides"""
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError("Unknown settings: %s" % ", ".join(sorted(unknown)))
        values = dict(
            population_size=config.POPULATION_SIZE,
            truncation_rate=config.TRUNCATION_RATE,
            confidence_level=config.CONFIDENCE_LEVEL,
            gibbs_sweep_multiplier=config.GIBBS_SWEEP_MULTIPLIER,
            ga_crossover_rate=config.GA_CROSSOVER_RATE,
            ga_mutation_rate=config.GA_MUTATION_RATE,
            ga_truncation_rate=config.GA_TRUNCATION_RATE,
            iteration_budget=config.ITERATION_BUDGET,
            stagnation_window=config.STAGNATION_WINDOW,
            seed=config.BASE_SEED,
            elitism=config.ELITISM,
            repair=config.REPAIR,
            cache_fitness=config.CACHE_FITNESS,
            jobs=config.JOBS,
        )
        # None means "not given"
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Population:
    solutions: List[Solution]
    fitnesses: Optional[np.ndarray] = None
    generation: int = 0

    def __len__(self):
        return len(self.solutions)

    @property
    def evaluated(self) -> bool:
        return self.fitnesses is not None

    def matrix(self) -> np.ndarray:
        """Solutions as rows of an integer matrix"""
        return np.array([s.values for s in self.solutions], dtype=np.int64)

    def best_index(self) -> int:
        # argmin returns the first of equal values
        return int(np.argmin(self.fitnesses))

    def subset(self, indices) -> "Population":
        fit = None if self.fitnesses is None else self.fitnesses[list(indices)]
        return Population([self.solutions[i] for i in indices], fit, self.generation)
