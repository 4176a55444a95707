"""Genetic algorithm baseline"""
import numpy as np

import rng
from assembly import ProblemSpec, make_solution
from .core import AlgoConfig, ConfigError, Population
from .selection import truncation_indices


def tournament(fitnesses: np.ndarray, pool: np.ndarray, gen: np.random.Generator) -> int:
    """Binary tournament among the pool indices, lower fitness wins, then lower index"""
    a, b = (int(pool[k]) for k in gen.integers(0, len(pool), size=2))
    if fitnesses[b] < fitnesses[a] or (fitnesses[b] == fitnesses[a] and b < a):
        return b
    return a


def crossover(p1: np.ndarray, p2: np.ndarray, rate: float, gen: np.random.Generator):
    """One-point crossover on the flat vector"""
    if len(p1) < 2 or gen.random() >= rate:
        return p1.copy(), p2.copy()
    cut = int(gen.integers(1, len(p1)))
    return (
        np.concatenate([p1[:cut], p2[cut:]]),
        np.concatenate([p2[:cut], p1[cut:]]),
    )


def mutate(child: np.ndarray, sizes: np.ndarray, rate: float, gen: np.random.Generator):
    """Every gene is redrawn uniformly from its domain with probability rate"""
    hit = gen.random(len(child)) < rate
    fresh = gen.integers(0, sizes)
    child[hit] = fresh[hit]
    return child


def ga_offspring(pop: Population, cfg: AlgoConfig, sizes: np.ndarray, gen: np.random.Generator):
    """Raw children matrix, before repair"""
    if not pop.evaluated:
        raise ConfigError("Population has to be evaluated before reproduction")
    parents = pop.matrix()
    pool = truncation_indices(pop.fitnesses, cfg.ga_truncation_rate)
    children = []
    while len(children) < len(pop):
        a = parents[tournament(pop.fitnesses, pool, gen)]
        b = parents[tournament(pop.fitnesses, pool, gen)]
        for child in crossover(a, b, cfg.ga_crossover_rate, gen):
            children.append(mutate(child, sizes, cfg.ga_mutation_rate, gen))
    return np.array(children[: len(pop)], dtype=np.int64)


def ga_step(
    pop: Population, cfg: AlgoConfig, spec: ProblemSpec, seed: int, repairer=None
) -> Population:
    """
    Next generation: tournament within the best part, crossover, mutation, repair.
    GeneticAlgorithm breeds every iteration with it.
    """
    gen = rng.generator(seed, "ga", pop.generation)
    raw = ga_offspring(pop, cfg, spec.domain_sizes, gen)
    solutions = []
    for idx, values in enumerate(raw):
        s = make_solution(spec, values)
        if repairer is not None:
            s = repairer(s, rng.derive_seed(seed, "repair", pop.generation + 1, idx)).repaired
        solutions.append(s)
    return Population(solutions, None, pop.generation + 1)
