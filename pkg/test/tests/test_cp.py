import itertools
from unittest import TestCase

from cp import (
    MAX_VALUE,
    MIN_VALUE,
    BudgetExhausted,
    ConditionalEquivalence,
    CountEquivalence,
    CpError,
    CpProblem,
    EmptyDomain,
    FixValue,
    MalformedConstraint,
    PathMatrixConnectivity,
    ProblemSealed,
    SearchStrategy,
    SumGreaterThan,
    UnknownVariable,
    ValueOrder,
    count_solutions,
    enumerate_solutions,
    solve,
)


def brute_force(problem):
    doms = [v.initial_domain for v in problem.variables]
    return [a for a in itertools.product(*doms) if problem.check(a)]


class ProblemTest(TestCase):
    def test_errors(self):
        p = CpProblem()
        with self.assertRaises(EmptyDomain):
            p.add_variable([])
        x = p.add_variable([0, 1])
        with self.assertRaises(UnknownVariable):
            p.add_constraint(FixValue(5, 0))
        with self.assertRaises(MalformedConstraint):
            p.add_constraint(FixValue(x, 2))
        with self.assertRaises(MalformedConstraint):
            p.add_constraint(SumGreaterThan([], 0))
        p.add_constraint(FixValue(x, 1))
        with self.assertRaises(EmptyDomain):
            p.add_constraint(FixValue(x, 0))
        solve(p)
        with self.assertRaises(ProblemSealed):
            p.add_variable([0, 1])

    def test_random_needs_seed(self):
        with self.assertRaises(CpError):
            SearchStrategy(ValueOrder.ASSIGN_RANDOM_VALUE)

    def test_copy_is_independent(self):
        p = CpProblem()
        x = p.add_variable([0, 1, 2])
        other = p.copy()
        other.restrict(x, [2])
        self.assertEqual(p.variables[x].domain, (0, 1, 2))
        self.assertEqual(solve(other).assignment, (2,))
        with self.assertRaises(EmptyDomain):
            other.restrict(x, [5])


class SearchTest(TestCase):
    def sum_problem(self):
        p = CpProblem()
        x = p.add_variable([0, 1, 2])
        y = p.add_variable([0, 1, 2])
        p.add_constraint(SumGreaterThan([x, y], 2))
        return p

    def test_value_order(self):
        self.assertEqual(solve(self.sum_problem(), MIN_VALUE).assignment, (1, 2))
        self.assertEqual(solve(self.sum_problem(), MAX_VALUE).assignment, (2, 2))

    def test_counts(self):
        p = self.sum_problem()
        self.assertEqual(count_solutions(p), 3)
        self.assertEqual(count_solutions(p, limit=2), 2)
        self.assertEqual(enumerate_solutions(p), [(1, 2), (2, 1), (2, 2)])

    def test_unsat(self):
        p = CpProblem()
        x = p.add_variable([0])
        p.add_constraint(SumGreaterThan([x], 0))
        res = solve(p)
        self.assertFalse(res.is_sat)
        self.assertEqual(res.nodes, 0)

    def test_budget(self):
        p = CpProblem()
        for _ in range(5):
            p.add_variable([0, 1])
        with self.assertRaises(BudgetExhausted):
            solve(p, node_budget=1)

    def test_guarded_sum(self):
        p = CpProblem()
        y = p.add_variable([0, 1])
        terms = [p.add_variable([0, 1, 2]) for _ in range(3)]
        p.add_constraint(SumGreaterThan(terms, 1, count_nonzero=True, guard=y))
        self.assertEqual(count_solutions(p), len(brute_force(p)))
        # 27 with the guard off, 27 - 1 - 3 * 2 with it on
        self.assertEqual(count_solutions(p), 27 + 20)

    def test_conditional_equivalence(self):
        p = CpProblem()
        x = p.add_variable([0, 1])
        y = p.add_variable([0, 1, 2])
        p.add_constraint(ConditionalEquivalence([(x, [1])], (y, [2])))
        self.assertEqual(count_solutions(p), 3)
        p = CpProblem()
        x = p.add_variable([0, 1])
        y = p.add_variable([0, 1, 2])
        p.add_constraint(ConditionalEquivalence([(x, [1])], (y, [2]), one_way=True))
        self.assertEqual(count_solutions(p), 4)

    def test_count_equivalence(self):
        p = CpProblem()
        t = p.add_variable([0, 1])
        a = p.add_variable([0, 1, 2])
        b = p.add_variable([0, 1, 2])
        p.add_constraint(CountEquivalence(t, [1], [a, b], [2]))
        self.assertEqual(count_solutions(p), 9)
        self.assertEqual(sorted(enumerate_solutions(p)), sorted(brute_force(p)))

    def test_connectivity(self):
        p = CpProblem()
        joints = {i: p.add_variable([0, 1]) for i in (1, 2, 3)}
        e12 = p.add_variable([0, 1])
        e23 = p.add_variable([0, 1])
        p.add_constraint(
            PathMatrixConnectivity(joints, [(e12, 1, 2), (e23, 2, 3)], groups={1: 0, 3: 1})
        )
        # both groups are always required, only the full path joins them
        self.assertEqual(count_solutions(p), 8)
        self.assertTrue(all(a[3] == 1 and a[4] == 1 for a in enumerate_solutions(p)))

    def test_matches_brute_force(self):
        p = CpProblem()
        v = [p.add_variable([0, 1, 2]) for _ in range(5)]
        p.add_constraint(SumGreaterThan(v[:3], 2))
        p.add_constraint(ConditionalEquivalence([(v[0], [1, 2]), (v[1], [2])], (v[3], [0])))
        p.add_constraint(CountEquivalence(v[4], [2], v[1:4], [1], threshold=1))
        p.add_constraint(
            PathMatrixConnectivity({1: v[0], 2: v[1]}, [(v[2], 1, 2)], groups={1: 0})
        )
        self.assertEqual(sorted(enumerate_solutions(p)), sorted(brute_force(p)))

    def test_trace(self):
        p = self.sum_problem()
        p.trace = True
        with self.assertLogs("cp.search", level="DEBUG") as cm:
            solve(p)
        self.assertTrue(any("decide" in line for line in cm.output))
