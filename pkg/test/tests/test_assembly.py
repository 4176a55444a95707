from unittest import TestCase

import rng
from assembly import (
    SolutionError,
    SpecError,
    ViolationKind,
    active_component_count,
    build_spec,
    is_connected,
    is_feasible,
    make_solution,
)
from .util import four_beam_solution, small_spec, suspension_spec, union_find_connected, values_with


def raw_spec(n, envos=None, **extra):
    raw = {"n_joints": n, "joint_types": 1, "component_types": 1, "envos": envos or {}}
    raw.update(extra)
    return raw


class SpecTest(TestCase):
    def test_suspension_variables(self):
        spec = suspension_spec()
        self.assertEqual(spec.n_variables, 29)
        self.assertEqual(spec.n_joints, 8)
        self.assertEqual(len(spec.components), 21)
        self.assertEqual(spec.free_joints, [7, 8])

    def test_single_pair(self):
        spec = build_spec(raw_spec(2))
        self.assertEqual(spec.n_variables, 3)
        self.assertEqual(spec.labels, ["y1", "y2", "z(1,2)"])

    def test_one_envo_excludes_all_pairs(self):
        spec = build_spec(raw_spec(3, {"ground": [1, 2, 3]}))
        self.assertEqual(spec.n_variables, 3)
        self.assertEqual(spec.components, [])

    def test_variable_order(self):
        spec = build_spec(raw_spec(4, {"a": [1, 2]}))
        # joints first, then (i, j) in lexicographic order without (1, 2)
        self.assertEqual(
            spec.labels,
            ["y1", "y2", "y3", "y4", "z(1,3)", "z(1,4)", "z(2,3)", "z(2,4)", "z(3,4)"],
        )
        self.assertEqual(spec.component_var(4, 1), spec.component_var(1, 4))
        self.assertIsNone(spec.component_var(1, 2))

    def test_invalid(self):
        with self.assertRaises(SpecError):
            build_spec(raw_spec(4, {"a": [1, 2], "b": [2, 3]}))
        with self.assertRaises(SpecError):
            build_spec(raw_spec(4, type_rules=[[2, 1]]))
        with self.assertRaises(SpecError):
            build_spec(raw_spec(4, type_rules=[[1, 3]]))
        with self.assertRaises(SpecError):
            build_spec(raw_spec(0))
        with self.assertRaises(SpecError):
            build_spec(raw_spec(3, {"a": [4]}))
        with self.assertRaises(SpecError):
            build_spec({"n_joints": 3})

    def test_digest(self):
        self.assertEqual(suspension_spec().digest, suspension_spec().digest)
        self.assertNotEqual(
            suspension_spec().digest, suspension_spec(degree_rule="literal-sum").digest
        )


class FeasibilityTest(TestCase):
    def spec3(self):
        return build_spec(raw_spec(3, {"envo1": [1, 2]}))

    def test_connected_degree_two(self):
        spec = self.spec3()
        s = make_solution(spec, values_with(spec, {1: 1, 2: 1, 3: 1}, {(1, 3): 1, (2, 3): 1}))
        self.assertEqual(is_feasible(spec, s), [])

    def test_under_connected(self):
        spec = self.spec3()
        s = make_solution(spec, values_with(spec, {1: 1, 2: 1, 3: 1}, {(1, 3): 1}))
        violations = is_feasible(spec, s)
        self.assertEqual(len(violations), 1)
        self.assertEqual(violations[0].kind, ViolationKind.UNDER_CONNECTED_JOINT)
        self.assertEqual(violations[0].detail, (spec.joint_var(3),))

    def test_disconnected_envos(self):
        spec = build_spec(raw_spec(2, {"a": [1], "b": [2]}))
        s = make_solution(spec, [0, 0, 0])
        violations = is_feasible(spec, s)
        self.assertEqual([v.kind for v in violations], [ViolationKind.DISCONNECTED])

    def test_inactive_joint_with_components(self):
        spec = self.spec3()
        s = make_solution(spec, values_with(spec, {2: 1, 3: 1}, {(1, 3): 1, (2, 3): 1}))
        kinds = [v.kind for v in is_feasible(spec, s)]
        self.assertEqual(kinds, [ViolationKind.INACTIVE_JOINT_WITH_COMPONENTS])

    def test_type_rule(self):
        spec = suspension_spec()
        s = four_beam_solution(spec)
        self.assertEqual(is_feasible(spec, s), [])
        # a shock on welded joints breaks the rule at both ends
        values = list(s.values)
        values[spec.component_var(1, 5)] = 2
        kinds = [v.kind for v in is_feasible(spec, make_solution(spec, values))]
        self.assertEqual(kinds, [ViolationKind.TYPE_RULE_BROKEN] * 2)
        values[spec.joint_var(1)] = 2
        values[spec.joint_var(5)] = 2
        self.assertEqual(is_feasible(spec, make_solution(spec, values)), [])

    def test_unconstrained(self):
        spec = build_spec(raw_spec(3, {"a": [1], "b": [2]}, constrained=False))
        self.assertEqual(is_feasible(spec, make_solution(spec, [0] * spec.n_variables)), [])

    def test_union_find_agreement(self):
        spec = small_spec(6, envos={"a": [1, 2], "b": [3]})
        gen = rng.generator(1, "union-find")
        for _ in range(1000):
            density = gen.random()
            values = [0] * spec.n_variables
            for v in spec.components:
                if gen.random() < density:
                    values[v.flat_index] = 1
            for i in range(1, spec.n_joints + 1):
                values[spec.joint_var(i)] = int(gen.integers(0, 2))
            self.assertEqual(is_connected(spec, values), union_find_connected(spec, values))


class SolutionTest(TestCase):
    def test_make_solution(self):
        spec = suspension_spec()
        with self.assertRaises(SolutionError):
            make_solution(spec, [0] * 28)
        with self.assertRaises(SolutionError):
            make_solution(spec, [3] + [0] * 28)
        s = make_solution(spec, [0] * 29)
        self.assertEqual(len(s.joints), 8)
        self.assertEqual(len(s.components), 21)

    def test_active_component_count(self):
        spec = suspension_spec()
        self.assertEqual(active_component_count(make_solution(spec, [0] * 29)), 0)
        s = four_beam_solution(spec, {(7, 8): 2, (1, 7): 2})
        self.assertEqual(active_component_count(s), 6)
