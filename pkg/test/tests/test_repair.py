from unittest import TestCase

import rng
from assembly import build_spec, is_feasible, make_solution
from cp import count_solutions
from repair import (
    EncodingError,
    RepairStage,
    Repairer,
    assign_joints,
    build_assembly_model,
    literal_connected,
    repair,
    verify_encodings_agree,
)
from .util import all_assignments, four_beam_solution, small_spec, suspension_spec, values_with


def random_solution(spec, gen):
    return make_solution(spec, gen.integers(0, spec.domain_sizes))


class RepairTest(TestCase):
    def test_random_solutions_become_feasible(self):
        spec = suspension_spec()
        repairer = Repairer(spec)
        gen = rng.generator(3, "repair-test")
        for k in range(100):
            s = random_solution(spec, gen)
            out = repairer(s, k)
            self.assertEqual(is_feasible(spec, out.repaired), [])
            before = s.components
            after = out.repaired.components
            if out.stage_used is RepairStage.REMOVE_COMPONENTS:
                # only drops: every output component was already there
                for a, b in zip(before, after):
                    self.assertIn(b, (0, a))
            else:
                # only additions: every input component survives unchanged
                self.assertIs(out.stage_used, RepairStage.ADD_COMPONENTS)
                for a, b in zip(before, after):
                    if a != 0:
                        self.assertEqual(a, b)

    def test_feasible_input_unchanged(self):
        spec = suspension_spec()
        s = four_beam_solution(spec)
        out = repair(spec, s, 0)
        self.assertEqual(out.repaired, s)
        self.assertEqual(out.joints_retyped, ())
        self.assertIs(out.stage_used, RepairStage.REMOVE_COMPONENTS)

    def test_empty_solution_gets_components(self):
        spec = suspension_spec()
        out = repair(spec, make_solution(spec, [0] * spec.n_variables), 7)
        self.assertIs(out.stage_used, RepairStage.ADD_COMPONENTS)
        self.assertEqual(is_feasible(spec, out.repaired), [])

    def test_deterministic(self):
        spec = suspension_spec()
        gen = rng.generator(5, "repair-test")
        s = random_solution(spec, gen)
        self.assertEqual(repair(spec, s, 11), repair(spec, s, 11))

    def test_dangling_component_removed(self):
        # triangle 1-2-3 plus a component to joint 4 that has nothing else
        spec = small_spec(4, envos={}, joint_types=1, component_types=1, type_rules=())
        triangle = {(1, 2): 1, (1, 3): 1, (2, 3): 1}
        joints = {i: 1 for i in range(1, 5)}
        s = make_solution(spec, values_with(spec, joints, {**triangle, (3, 4): 1}))
        self.assertNotEqual(is_feasible(spec, s), [])
        out = repair(spec, s, 0)
        self.assertIs(out.stage_used, RepairStage.REMOVE_COMPONENTS)
        expected = values_with(spec, {1: 1, 2: 1, 3: 1}, triangle)
        self.assertEqual(list(out.repaired.values), expected)

    def test_disconnected_clusters_bridged(self):
        # two triangles, each holding one envo, nothing in between
        spec = small_spec(
            6, envos={"a": [1], "b": [6]}, joint_types=1, component_types=1, type_rules=()
        )
        clusters = {(1, 2): 1, (1, 3): 1, (2, 3): 1, (4, 5): 1, (4, 6): 1, (5, 6): 1}
        joints = {i: 1 for i in range(1, 7)}
        s = make_solution(spec, values_with(spec, joints, clusters))
        self.assertNotEqual(is_feasible(spec, s), [])
        out = repair(spec, s, 0)
        self.assertIs(out.stage_used, RepairStage.ADD_COMPONENTS)
        self.assertEqual(is_feasible(spec, out.repaired), [])
        # min-value search leaves every bridge at 0 until the last one
        expected = values_with(spec, joints, {**clusters, (3, 6): 1})
        self.assertEqual(list(out.repaired.values), expected)

    def test_idempotent(self):
        spec = suspension_spec()
        repairer = Repairer(spec)
        gen = rng.generator(9, "repair-test")
        for k in range(200):
            once = repairer(random_solution(spec, gen), k).repaired
            twice = repairer(once, k)
            self.assertEqual(twice.repaired, once)
            self.assertIs(twice.stage_used, RepairStage.REMOVE_COMPONENTS)

    def test_unconstrained_is_identity(self):
        spec = small_spec(4, constrained=False)
        s = make_solution(spec, [1] * spec.n_variables)
        out = repair(spec, s, 0)
        self.assertEqual(out.repaired, s)
        self.assertIsNone(out.stage_used)
        self.assertEqual(out.cp_nodes_explored, 0)

    def test_assign_joints(self):
        spec = suspension_spec()
        values = values_with(spec, {i: 1 for i in range(1, 7)}, {(1, 5): 2, (2, 5): 1})
        fixed, retyped = assign_joints(spec, values)
        # shocks need spherical joints, a joint without components is absent or welded
        self.assertEqual(fixed[spec.joint_var(1)], 2)
        self.assertEqual(fixed[spec.joint_var(5)], 2)
        self.assertEqual(fixed[spec.joint_var(2)], 1)
        self.assertEqual(sorted(retyped), [spec.joint_var(1), spec.joint_var(5)])


class ModelTest(TestCase):
    def test_complete_on_small_problem(self):
        spec = small_spec(4, joint_types=1, component_types=1, type_rules=())
        model = build_assembly_model(spec)
        expected = sum(
            1 for a in all_assignments(spec) if not is_feasible(spec, make_solution(spec, a))
        )
        self.assertEqual(count_solutions(model.problem), expected)

    def test_complete_with_type_rules(self):
        spec = small_spec(3, joint_types=2, component_types=2)
        model = build_assembly_model(spec)
        expected = sum(
            1 for a in all_assignments(spec) if not is_feasible(spec, make_solution(spec, a))
        )
        self.assertEqual(count_solutions(model.problem), expected)

    def test_literal_sum_rule(self):
        spec = small_spec(3, joint_types=2, component_types=2, degree_rule="literal-sum")
        model = build_assembly_model(spec)
        expected = sum(
            1 for a in all_assignments(spec) if not is_feasible(spec, make_solution(spec, a))
        )
        self.assertEqual(count_solutions(model.problem), expected)


class EncodingTest(TestCase):
    def test_encodings_agree(self):
        spec = small_spec(4, envos={"a": [1, 2]}, joint_types=1, component_types=1, type_rules=())
        report = verify_encodings_agree(spec, 100, 1)
        self.assertTrue(report.ok, report.disagreements)

    def test_path_matrix(self):
        spec = build_spec({"n_joints": 3, "joint_types": 1, "component_types": 1})
        values = values_with(spec, {1: 1, 2: 1, 3: 1}, {(1, 2): 1, (2, 3): 1})
        ok, matrix = literal_connected(spec, values)
        self.assertTrue(ok)
        self.assertEqual(matrix.entry(1, 2, 1), 1)
        self.assertEqual(matrix.entry(1, 3, 1), 0)
        self.assertEqual(matrix.entry(3, 1, 2), 1)
        self.assertTrue(matrix.reachable(1, 3))
        with self.assertRaises(EncodingError):
            matrix.entry(2, 2, 1)
        values = values_with(spec, {1: 1, 2: 1, 3: 1}, {(1, 2): 1})
        self.assertFalse(literal_connected(spec, values)[0])

    def test_literal_size_limit(self):
        with self.assertRaises(EncodingError):
            verify_encodings_agree(suspension_spec(), 1, 0)
