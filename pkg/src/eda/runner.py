"""Optimizers and the main loop"""
import logging
import time
from typing import Dict, List, Optional

import numpy as np

import rng
from assembly import ProblemSpec, Solution, is_feasible, make_solution
from repair import Repairer
from workspace import config
from .core import AlgoConfig, ConfigError, Population, RunAborted
from .ga import ga_step
from .history import ModelSnapshot, RunHistory
from .model import DependencyStats, estimate_model
from .sampling import ancestral_sample_batch, gibbs_sample_batch
from .selection import select_truncation

log = logging.getLogger(__name__)


def initialize_population(
    spec: ProblemSpec, size: int, seed: int, repairer: Optional[Repairer] = None
) -> Population:
    """Uniform random solutions, repaired when a repairer is given"""
    if size < 2:
        raise ConfigError("Population size must be at least 2")
    gen = rng.generator(seed, "init")
    raw = gen.integers(0, spec.domain_sizes, size=(size, spec.n_variables))
    return Population(_finish(spec, raw, seed, 0, repairer), None, 0)


def _finish(spec, raw, seed, generation, repairer) -> List[Solution]:
    solutions = []
    for idx, values in enumerate(raw):
        s = make_solution(spec, values)
        if repairer is not None:
            s = repairer(s, rng.derive_seed(seed, "repair", generation, idx)).repaired
        solutions.append(s)
    return solutions


class Optimizer:
    # name used on the command line
    ID = None
    NAME = "Optimizer"
    # True if the optimizer estimates a probability model
    HAS_MODEL = False

    def __init__(self, spec: ProblemSpec, cfg: AlgoConfig, evaluator, pool=None):
        self.spec = spec
        self.cfg = cfg
        self.evaluator = evaluator
        # anything with map(fn, items) -> ordered results
        self.pool = pool
        self.repairer = Repairer(spec, trace=cfg.trace_cp) if cfg.repair else None
        self.cache: Dict[tuple, float] = {}
        self.evaluations = 0
        self.stats: Optional[DependencyStats] = None
        self.history = RunHistory(
            algorithm=cfg.algorithm,
            seed=cfg.seed,
            spec_digest=spec.digest,
            config=cfg.to_dict(),
            evaluator=getattr(evaluator, "LABEL", type(evaluator).__name__),
        )

    def offspring(self, pop: Population, iteration: int, gen: np.random.Generator) -> np.ndarray:
        """Raw values of the next population, one row per solution"""
        raise NotImplementedError()

    def evaluate(self, pop: Population):
        """Fills fitnesses, infeasible candidates get the penalty without a simulation"""
        fitnesses = np.zeros(len(pop))
        # key -> positions waiting for the evaluator, duplicates share a key when caching
        pending: Dict[object, List[int]] = {}
        for idx, s in enumerate(pop.solutions):
            violations = [] if self.cfg.repair else is_feasible(self.spec, s)
            if violations:
                fitnesses[idx] = config.INFEASIBLE_PENALTY
            elif self.cfg.cache_fitness and s.values in self.cache:
                fitnesses[idx] = self.cache[s.values]
            else:
                key = s.values if self.cfg.cache_fitness else idx
                pending.setdefault(key, []).append(idx)
        batch = [pop.solutions[idxs[0]] for idxs in pending.values()]
        try:
            if self.pool is not None and len(batch) > 1:
                results = self.pool.map(self.evaluator, batch)
            else:
                results = [self.evaluator(s) for s in batch]
        except Exception as e:
            raise RunAborted("Evaluator failed: %s" % e, self.history) from e
        self.evaluations += len(batch)
        for s, idxs, f in zip(batch, pending.values(), results):
            if self.cfg.cache_fitness:
                self.cache[s.values] = float(f)
            fitnesses[idxs] = f
        pop.fitnesses = fitnesses

    def initialize(self) -> Population:
        pop = initialize_population(self.spec, self.cfg.population_size, self.cfg.seed, self.repairer)
        self.evaluate(pop)
        return pop

    def breed(self, pop: Population, iteration: int) -> Population:
        """Repaired, unevaluated population of the given iteration"""
        gen = rng.generator(self.cfg.seed, self.ID, iteration)
        raw = self.offspring(pop, iteration, gen)
        return Population(_finish(self.spec, raw, self.cfg.seed, iteration, self.repairer), None, iteration)

    def iterate(self, pop: Population, iteration: int) -> Population:
        new = self.breed(pop, iteration)
        if self.cfg.elitism and self.history.best is not None:
            new.solutions[0] = self.history.best
        self.evaluate(new)
        return new

    def _note(self, pop: Population, iteration: int, started: float):
        idx = pop.best_index()
        self.history.offer(pop.solutions[idx], pop.fitnesses[idx])
        wall_ms = (time.perf_counter() - started) * 1000.0
        self.history.record(iteration, np.mean(pop.fitnesses), self.evaluations, wall_ms)
        log.info(
            "%s iteration %d: best %.6g, mean %.6g, %d evaluations",
            self.ID,
            iteration,
            self.history.best_fitness,
            np.mean(pop.fitnesses),
            self.evaluations,
        )

    def run(self) -> RunHistory:
        started = time.perf_counter()
        pop = self.initialize()
        self._note(pop, 0, started)
        since_improved = 0
        for iteration in range(1, self.cfg.iteration_budget + 1):
            started = time.perf_counter()
            before = self.history.best_fitness
            pop = self.iterate(pop, iteration)
            self._note(pop, iteration, started)
            if self.history.best_fitness < before:
                since_improved = 0
            else:
                since_improved += 1
            window = self.cfg.stagnation_window
            if window is not None and since_improved >= window:
                log.info("No improvement for %d iterations, stopping", since_improved)
                break
        self.history.stats = self.stats
        return self.history


class BmdaGs(Optimizer):
    """Adaptive chi-square tests and Gibbs sampling"""

    ID = "bmda-gs"
    NAME = "BMDA-GS"
    HAS_MODEL = True
    ADAPTIVE_DOF = True

    def estimate(self, pop: Population, iteration: int):
        selected = select_truncation(pop, self.cfg.truncation_rate)
        model, self.stats = estimate_model(
            selected.matrix(),
            self.spec.domain_sizes,
            self.cfg.confidence_level,
            adaptive_dof=self.ADAPTIVE_DOF,
            previous=self.stats,
        )
        self.history.snapshots.append(ModelSnapshot(iteration, model, self.stats))
        return model

    def offspring(self, pop, iteration, gen):
        model = self.estimate(pop, iteration)
        return gibbs_sample_batch(model, len(pop), gen, self.cfg.gibbs_sweep_multiplier)


class BmdaOriginal(BmdaGs):
    """Fixed degrees of freedom and ancestral sampling along the dependency forest"""

    ID = "bmda"
    NAME = "BMDA"
    ADAPTIVE_DOF = False

    def offspring(self, pop, iteration, gen):
        model = self.estimate(pop, iteration)
        return ancestral_sample_batch(model, self.stats, len(pop), gen)


class GeneticAlgorithm(Optimizer):
    ID = "ga"
    NAME = "GA"

    def breed(self, pop, iteration):
        return ga_step(pop, self.cfg, self.spec, self.cfg.seed, self.repairer)


OPTIMIZERS = {cls.ID: cls for cls in (BmdaGs, BmdaOriginal, GeneticAlgorithm)}


def run(spec: ProblemSpec, cfg: AlgoConfig, evaluator, pool=None) -> RunHistory:
    """Full optimization loop of the configured algorithm"""
    try:
        cls = OPTIMIZERS[cfg.algorithm]
    except KeyError:
        raise ConfigError("unsupported algorithm %r" % cfg.algorithm)
    log.info(
        "Running %s on %s: population %d, %d iterations, seed %d",
        cls.NAME,
        spec.name,
        cfg.population_size,
        cfg.iteration_budget,
        cfg.seed,
    )
    return cls(spec, cfg, evaluator, pool).run()
