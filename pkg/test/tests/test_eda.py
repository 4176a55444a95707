import itertools
from unittest import TestCase

import numpy as np

import rng
from assembly import is_feasible, load_spec, make_solution
from eda import (
    AlgoConfig,
    BmdaGs,
    GeneticAlgorithm,
    ConfigError,
    Population,
    ProbabilityModel,
    RunAborted,
    ancestral_sample_batch,
    bmda_ancestral_sample,
    dependency_forest,
    estimate_model,
    ga_step,
    gibbs_sample,
    gibbs_sample_batch,
    independent_model,
    run,
    select_truncation,
    truncation_indices,
    truncation_size,
)
from eda.ga import crossover, mutate, tournament
from fitness import get_evaluator
from repair import Repairer
from workspace import config
from .util import problem_file, suspension_spec


class Constant:
    """Evaluator stub counting its calls"""

    LABEL = "constant"

    def __init__(self, value=0.0):
        self.value = value
        self.calls = 0

    def __call__(self, s):
        self.calls += 1
        return self.value


class Failing:
    def __call__(self, s):
        raise ValueError("broken evaluator")


def dependent_samples():
    """Columns 0 and 1 equal, column 2 independent of both"""
    x0 = np.array([0, 1] * 50)
    x2 = np.array([0, 0, 1, 1] * 25)
    return np.column_stack([x0, x0, x2])


def onemax_spec():
    return load_spec(problem_file("onemax.json"))


class ConfigTest(TestCase):
    def test_validation(self):
        with self.assertRaises(ConfigError) as cm:
            AlgoConfig(algorithm="moa")
        self.assertIn("unsupported algorithm", str(cm.exception))
        with self.assertRaises(ConfigError):
            AlgoConfig(population_size=1)
        with self.assertRaises(ConfigError):
            AlgoConfig(truncation_rate=0)
        with self.assertRaises(ConfigError):
            AlgoConfig(confidence_level=1.0)
        with self.assertRaises(ConfigError):
            AlgoConfig(stagnation_window=0)

    def test_from_defaults(self):
        cfg = AlgoConfig.from_defaults(population_size=30, seed=None)
        self.assertEqual(cfg.population_size, 30)
        self.assertEqual(cfg.seed, config.BASE_SEED)
        self.assertEqual(cfg.truncation_rate, config.TRUNCATION_RATE)
        with self.assertRaises(ConfigError):
            AlgoConfig.from_defaults(colour="red")


class SelectionTest(TestCase):
    def test_truncation_size(self):
        self.assertEqual(truncation_size(100, 0.2), 20)
        self.assertEqual(truncation_size(10, 0.25), 3)
        self.assertEqual(truncation_size(3, 0.01), 1)
        with self.assertRaises(ConfigError):
            truncation_size(10, 0)

    def test_ties_keep_earlier(self):
        idx = truncation_indices(np.array([3.0, 1.0, 1.0, 2.0]), 0.5)
        self.assertEqual(idx.tolist(), [1, 2])

    def test_needs_fitness(self):
        spec = onemax_spec()
        pop = Population([make_solution(spec, [0] * spec.n_variables)] * 2)
        with self.assertRaises(ConfigError):
            select_truncation(pop, 0.5)


class ModelTest(TestCase):
    def test_neighbors(self):
        model, stats = estimate_model(dependent_samples(), [2, 2, 2])
        self.assertEqual(model.neighbors.tolist(), [1, 0, -1])
        self.assertEqual(stats.significant_pairs(), [(0, 1)])
        self.assertAlmostEqual(stats.chi2[0, 1], 100.0)
        self.assertAlmostEqual(stats.chi2[0, 2], 0.0)
        np.testing.assert_allclose(model.conditionals[0], np.eye(2))
        self.assertIsNone(model.conditionals[2])
        np.testing.assert_allclose(model.marginals[2], [0.5, 0.5])

    def test_cumulative(self):
        samples = dependent_samples()
        _, first = estimate_model(samples, [2, 2, 2])
        _, second = estimate_model(samples, [2, 2, 2], previous=first)
        self.assertAlmostEqual(second.cumulative_chi2[0, 1], 200.0)
        self.assertTrue(second.ever_significant[0, 1])

    def test_unseen_parent_rows_fall_back(self):
        # x1 never takes value 2, its row in p(x0 | x1) is the marginal of x0
        samples = dependent_samples()
        model, _ = estimate_model(samples, [3, 3, 2])
        np.testing.assert_allclose(model.conditionals[0][2], model.marginals[0])
        self.assertEqual(model.observed_rows[0].tolist(), [True, True, False])

    def test_independent(self):
        model = independent_model([2, 3])
        np.testing.assert_allclose(model.marginals[1], [1 / 3] * 3)
        self.assertEqual(model.neighbors.tolist(), [-1, -1])


def ternary_chain_model():
    """x0 and x1 depend on each other, x2 on x1, every row strictly positive"""
    rows = [
        np.array([[0.7, 0.2, 0.1], [0.2, 0.6, 0.2], [0.1, 0.2, 0.7]]),
        np.array([[0.6, 0.3, 0.1], [0.25, 0.5, 0.25], [0.1, 0.3, 0.6]]),
        np.array([[0.5, 0.4, 0.1], [0.3, 0.3, 0.4], [0.1, 0.2, 0.7]]),
    ]
    return ProbabilityModel(
        domain_sizes=np.array([3, 3, 3]),
        marginals=[np.full(3, 1 / 3)] * 3,
        neighbors=np.array([1, 0, 1]),
        conditionals=rows,
        observed_rows=[np.ones(3, dtype=bool)] * 3,
    )


def stationary_distribution(model):
    """Exact limit of the random-scan chain, by enumerating every state"""
    states = list(itertools.product(*[range(d) for d in model.domain_sizes]))
    index = {s: k for k, s in enumerate(states)}
    T = np.zeros((len(states), len(states)))
    for s in states:
        for i in range(model.n):
            row = model.conditionals[i][s[model.neighbors[i]]]
            for v, p in enumerate(row):
                t = s[:i] + (v,) + s[i + 1:]
                T[index[s], index[t]] += p / model.n
    pi = np.full(len(states), 1.0 / len(states))
    for _ in range(2000):
        pi = pi @ T
    return states, pi


class SamplingTest(TestCase):
    def test_gibbs_stationary(self):
        model = ternary_chain_model()
        states, exact = stationary_distribution(model)
        self.assertEqual(len(states), 27)
        x = gibbs_sample_batch(model, 10000, rng.generator(0, "gibbs-test"), sweep_multiplier=200)
        codes = (x * np.array([9, 3, 1])).sum(axis=1)
        freq = np.bincount(codes, minlength=27) / len(x)
        self.assertLessEqual(0.5 * np.abs(freq - exact).sum(), 0.05)

    def test_gibbs_absorbing_pair(self):
        # each variable copies the other, marginals say nothing
        copy_rows = np.eye(2)
        model = ProbabilityModel(
            domain_sizes=np.array([2, 2]),
            marginals=[np.array([0.5, 0.5])] * 2,
            neighbors=np.array([1, 0]),
            conditionals=[copy_rows, copy_rows],
            observed_rows=[np.array([True, True])] * 2,
        )
        x = gibbs_sample_batch(model, 500, rng.generator(3, "gibbs-test"), sweep_multiplier=10)
        self.assertEqual({tuple(row) for row in x.tolist()}, {(0, 0), (1, 1)})

    def test_gibbs_in_domain(self):
        model = independent_model([2, 3, 5])
        x = gibbs_sample_batch(model, 50, rng.generator(1, "gibbs-test"), sweep_multiplier=3)
        self.assertTrue(np.all(x >= 0))
        self.assertTrue(np.all(x < np.array([2, 3, 5])))

    def test_forest(self):
        model, stats = estimate_model(dependent_samples(), [2, 2, 2])
        self.assertEqual(dependency_forest(model, stats), [(0, [(0, 1)]), (2, [])])

    def test_gibbs_sample_solution(self):
        spec = onemax_spec()
        model = independent_model(spec.domain_sizes)
        s = gibbs_sample(model, spec, 5, sweep_multiplier=3)
        self.assertEqual(len(s), spec.n_variables)
        self.assertEqual(s, gibbs_sample(model, spec, 5, sweep_multiplier=3))

    def test_gibbs_sample_repaired(self):
        spec = suspension_spec()
        model = independent_model(spec.domain_sizes)
        s = gibbs_sample(model, spec, 2, Repairer(spec), sweep_multiplier=3)
        self.assertEqual(is_feasible(spec, s), [])

    def test_ancestral_sample_solution(self):
        model, stats = estimate_model(dependent_samples(), [2, 2, 2])
        for seed in range(10):
            s = bmda_ancestral_sample(model, stats, seed)
            self.assertEqual(s.values[0], s.values[1])

    def test_ancestral_follows_dependency(self):
        model, stats = estimate_model(dependent_samples(), [2, 2, 2])
        x = ancestral_sample_batch(model, stats, 200, rng.generator(2, "ancestral-test"))
        self.assertTrue(np.array_equal(x[:, 0], x[:, 1]))
        self.assertEqual(set(x[:, 2].tolist()), {0, 1})


class GaTest(TestCase):
    def test_crossover(self):
        gen = rng.generator(0, "ga-test")
        a = np.array([0, 0, 0, 0])
        b = np.array([1, 1, 1, 1])
        c, d = crossover(a, b, 0.0, gen)
        self.assertEqual((c.tolist(), d.tolist()), (a.tolist(), b.tolist()))
        c, d = crossover(np.array([0]), np.array([1]), 1.0, gen)
        self.assertEqual((c.tolist(), d.tolist()), ([0], [1]))
        c, d = crossover(a, b, 1.0, gen)
        # one cut: a prefix of zeros, then ones, mirrored in the other child
        self.assertEqual((c + d).tolist(), [1, 1, 1, 1])
        self.assertEqual(c.tolist(), sorted(c.tolist()))

    def test_mutate(self):
        gen = rng.generator(1, "ga-test")
        sizes = np.array([2, 3, 4, 5])
        child = np.array([1, 2, 3, 4])
        self.assertEqual(mutate(child.copy(), sizes, 0.0, gen).tolist(), [1, 2, 3, 4])
        for _ in range(20):
            out = mutate(child.copy(), sizes, 1.0, gen)
            self.assertTrue(np.all(out < sizes))

    def test_step(self):
        spec = onemax_spec()
        cfg = AlgoConfig(algorithm="ga", population_size=10)
        gen = rng.generator(3, "ga-test")
        raw = gen.integers(0, 2, size=(10, spec.n_variables))
        pop = Population([make_solution(spec, row) for row in raw])
        pop.fitnesses = np.array([-float(sum(row)) for row in raw])
        new = ga_step(pop, cfg, spec, 7)
        self.assertEqual(len(new), 10)
        self.assertEqual(new.generation, 1)
        self.assertFalse(new.evaluated)
        self.assertEqual(new.matrix().tolist(), ga_step(pop, cfg, spec, 7).matrix().tolist())
        unevaluated = Population(pop.solutions)
        with self.assertRaises(ConfigError):
            ga_step(unevaluated, cfg, spec, 7)

    def test_runner_breeds_with_step(self):
        spec = suspension_spec()
        cfg = AlgoConfig(algorithm="ga", population_size=10, seed=4)
        opt = GeneticAlgorithm(spec, cfg, Constant())
        pop = opt.initialize()
        bred = opt.breed(pop, 1)
        expected = ga_step(pop, cfg, spec, cfg.seed, opt.repairer)
        self.assertEqual(bred.matrix().tolist(), expected.matrix().tolist())
        self.assertEqual(bred.generation, 1)
        self.assertTrue(all(is_feasible(spec, s) == [] for s in bred.solutions))

    def test_tournament(self):
        fit = np.array([5.0, 1.0, 3.0])
        gen = rng.generator(2, "ga-test")
        for _ in range(20):
            self.assertEqual(tournament(fit, np.array([1]), gen), 1)
            self.assertIn(tournament(fit, np.array([1, 2]), gen), (1, 2))


class RunTest(TestCase):
    def cfg(self, algorithm="bmda-gs", **kw):
        values = dict(
            algorithm=algorithm,
            population_size=20,
            iteration_budget=5,
            seed=1,
            gibbs_sweep_multiplier=10,
        )
        values.update(kw)
        return AlgoConfig(**values)

    def test_invariants(self):
        spec = onemax_spec()
        evaluator = get_evaluator(spec)
        for algorithm in ("bmda-gs", "bmda", "ga"):
            history = run(spec, self.cfg(algorithm), evaluator)
            self.assertEqual(history.iterations, 6)
            best = [r.best_fitness for r in history.records]
            self.assertEqual(best, sorted(best, reverse=True))
            evals = [r.evaluations for r in history.records]
            self.assertEqual(evals, sorted(evals))
            self.assertEqual(evaluator(history.best), history.best_fitness)
            expected = 5 if algorithm != "ga" else 0
            self.assertEqual(len(history.snapshots), expected)

    def test_deterministic(self):
        spec = onemax_spec()
        evaluator = get_evaluator(spec)
        for algorithm in ("bmda-gs", "bmda", "ga"):
            a = run(spec, self.cfg(algorithm), evaluator)
            b = run(spec, self.cfg(algorithm), evaluator)
            self.assertEqual(a.best, b.best)
            self.assertEqual(
                [(r.best_fitness, r.evaluations) for r in a.records],
                [(r.best_fitness, r.evaluations) for r in b.records],
            )

    def test_fixed_dof(self):
        spec = onemax_spec()
        history = run(spec, self.cfg("bmda"), get_evaluator(spec))
        dof = history.snapshots[-1].stats.dof
        off = ~np.eye(spec.n_variables, dtype=bool)
        self.assertTrue(np.all(dof[off] == 1))
        history = run(spec, self.cfg("bmda-gs"), get_evaluator(spec))
        self.assertTrue(np.all(history.snapshots[-1].stats.dof <= 1))

    def test_stagnation(self):
        spec = onemax_spec()
        history = run(spec, self.cfg(stagnation_window=1), Constant())
        self.assertEqual(history.iterations, 2)

    def test_aborted(self):
        spec = onemax_spec()
        with self.assertRaises(RunAborted) as cm:
            run(spec, self.cfg(), Failing())
        self.assertIsNotNone(cm.exception.history)
        self.assertEqual(cm.exception.history.iterations, 0)

    def test_penalty_without_repair(self):
        spec = suspension_spec()
        evaluator = Constant()
        opt = BmdaGs(spec, self.cfg(repair=False), evaluator)
        pop = opt.initialize()
        feasible = 0
        for s, f in zip(pop.solutions, pop.fitnesses):
            if is_feasible(spec, s):
                self.assertEqual(f, config.INFEASIBLE_PENALTY)
            else:
                self.assertEqual(f, 0.0)
                feasible += 1
        self.assertEqual(evaluator.calls, feasible)

    def test_repair_on_evaluates_everything(self):
        spec = suspension_spec()
        evaluator = Constant(3.0)
        opt = BmdaGs(spec, self.cfg(), evaluator)
        empty = make_solution(spec, [0] * spec.n_variables)
        pop = Population([empty])
        opt.evaluate(pop)
        self.assertEqual(pop.fitnesses.tolist(), [3.0])
        self.assertEqual(evaluator.calls, 1)

    def test_cache(self):
        spec = onemax_spec()
        ones = make_solution(spec, [1] * spec.n_variables)
        zeros = make_solution(spec, [0] * spec.n_variables)
        for cache, calls in ((True, 2), (False, 4)):
            evaluator = Constant()
            opt = BmdaGs(spec, self.cfg(cache_fitness=cache), evaluator)
            opt.evaluate(Population([ones, zeros, ones, ones]))
            self.assertEqual(evaluator.calls, calls)
            self.assertEqual(opt.evaluations, calls)
