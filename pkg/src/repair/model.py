"""Constraint model of an assembly problem"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from assembly import ProblemSpec
from cp import (
    ConditionalEquivalence,
    CountEquivalence,
    CpProblem,
    FixValue,
    PathMatrixConnectivity,
    SumGreaterThan,
)

log = logging.getLogger(__name__)


@dataclass
class AssemblyModel:
    spec: ProblemSpec
    problem: CpProblem
    # flat variable index -> solver handle
    handles: List[int]

    def handle(self, flat_index: int) -> int:
        return self.handles[flat_index]

    def to_values(self, assignment: Sequence[int]) -> Tuple[int, ...]:
        """Solver assignment back to flat variable order"""
        return tuple(assignment[h] for h in self.handles)


def build_assembly_model(spec: ProblemSpec, trace: bool = False) -> AssemblyModel:
    """
    Variables and configuration constraints of a problem.
    Component variables are declared before joint variables
    so declaration-order search decides the structure first.
    """
    problem = CpProblem(spec.name, trace=trace)
    handles = [None] * spec.n_variables
    for v in spec.components:
        handles[v.flat_index] = problem.add_variable(spec.domain(v.flat_index), v.label)
    for i in range(1, spec.n_joints + 1):
        y = spec.joint_var(i)
        handles[y] = problem.add_variable(spec.domain(y), spec.labels[y])
    model = AssemblyModel(spec, problem, handles)
    if not spec.constrained:
        problem.seal()
        return model

    joint_h = {i: handles[spec.joint_var(i)] for i in range(1, spec.n_joints + 1)}
    nonzero_z = range(1, spec.n_component_types + 1)
    nonzero_y = range(1, spec.n_joint_types + 1)

    problem.add_constraint(
        PathMatrixConnectivity(
            joint_h,
            [(handles[v.flat_index], v.pair[0], v.pair[1]) for v in spec.components],
            groups=spec.envo_of,
        )
    )

    # an active free joint carries at least two components
    for i in spec.free_joints:
        incident = [handles[c] for c in spec.incident[i]]
        if not incident:
            problem.add_constraint(FixValue(joint_h[i], 0))
            continue
        problem.add_constraint(
            SumGreaterThan(
                incident, 1, count_nonzero=spec.degree_rule == "count", guard=joint_h[i]
            )
        )

    # no component on an absent joint
    for v in spec.components:
        z = handles[v.flat_index]
        for i in v.pair:
            problem.add_constraint(
                ConditionalEquivalence([(z, nonzero_z)], (joint_h[i], nonzero_y), one_way=True)
            )

    # joint type g  <=>  some incident component of type h
    for i in range(1, spec.n_joints + 1):
        incident = [handles[c] for c in spec.incident[i]]
        for g, h in spec.type_rules:
            problem.add_constraint(CountEquivalence(joint_h[i], [g], incident, [h]))

    problem.seal()
    log.debug("Assembly model %s: %s", spec.name, problem.stats())
    return model
