"""
Three-stage repair: drop components, add components, retype joints.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import rng
from assembly import ProblemSpec, Solution, is_feasible, make_solution
from cp import MAX_VALUE, MIN_VALUE, BudgetExhausted, solve
from workspace import config
from .core import RepairFailed
from .model import AssemblyModel, build_assembly_model

log = logging.getLogger(__name__)


class RepairStage(Enum):
    REMOVE_COMPONENTS = "RemoveComponents"
    ADD_COMPONENTS = "AddComponents"


@dataclass(frozen=True)
class RepairOutcome:
    repaired: Solution
    # None when the problem has no configuration constraints
    stage_used: Optional[RepairStage]
    # flat indices of joints whose code changed
    joints_retyped: Tuple[int, ...]
    cp_nodes_explored: int


def _solve_stage(problem, strategy, node_budget):
    try:
        res = solve(problem, strategy, node_budget=node_budget)
    except BudgetExhausted as e:
        log.warning("%s", e)
        return None, node_budget or 0
    return res.assignment, res.nodes


def allowed_joint_codes(spec: ProblemSpec, joint: int, values: Sequence[int]) -> List[int]:
    """Joint codes consistent with the components currently on the joint"""
    used = {values[c] for c in spec.incident[joint] if values[c] != 0}
    if not used:
        if joint not in spec.envo_of:
            return [0]
        ruled = {g for g, _ in spec.type_rules}
        return [c for c in range(spec.n_joint_types + 1) if c not in ruled]
    return [
        c
        for c in range(1, spec.n_joint_types + 1)
        if all((c == g) == (h in used) for g, h in spec.type_rules)
    ]


def assign_joints(
    spec: ProblemSpec, values: Sequence[int], default_code: Optional[int] = None
) -> Tuple[List[int], Tuple[int, ...]]:
    """Sets every joint code from its components, keeps the current code when allowed"""
    if default_code is None:
        default_code = config.DEFAULT_JOINT_CODE
    values = list(values)
    retyped = []
    for i in range(1, spec.n_joints + 1):
        y = spec.joint_var(i)
        allowed = allowed_joint_codes(spec, i, values)
        if not allowed:
            raise RepairFailed("No joint type fits the components on joint %d" % i)
        cur = values[y]
        if cur in allowed:
            continue
        values[y] = default_code if default_code in allowed else allowed[0]
        retyped.append(y)
    return values, tuple(retyped)


class Repairer:
    """Keeps the constraint model of a spec around between repairs"""

    def __init__(self, spec: ProblemSpec, node_budget: Optional[int] = None, trace=False):
        self.spec = spec
        self.node_budget = node_budget if node_budget is not None else config.CP_NODE_BUDGET
        self.model = build_assembly_model(spec, trace=trace) if spec.constrained else None

    def __call__(self, s: Solution, seed: int) -> RepairOutcome:
        return repair(self.spec, s, seed, model=self.model, node_budget=self.node_budget)


def _remove_stage(model: AssemblyModel, values, node_budget):
    """Zero components stay zero, the others may only be dropped"""
    problem = model.problem.copy()
    for v in model.spec.components:
        cur = values[v.flat_index]
        problem.restrict(model.handle(v.flat_index), {0, cur})
    return _solve_stage(problem, MAX_VALUE, node_budget)


def _add_stage(model: AssemblyModel, values, seed, node_budget):
    """Present components are frozen, every missing one may appear with a random type"""
    spec = model.spec
    problem = model.problem.copy()
    gen = rng.generator(seed, "repair", "add-components")
    for v in spec.components:
        cur = values[v.flat_index]
        if cur != 0:
            problem.restrict(model.handle(v.flat_index), {cur})
        else:
            r = int(gen.integers(1, spec.n_component_types + 1))
            problem.restrict(model.handle(v.flat_index), {0, r})
    return _solve_stage(problem, MIN_VALUE, node_budget)


def repair(
    spec: ProblemSpec,
    s: Solution,
    seed: int,
    model: Optional[AssemblyModel] = None,
    node_budget: Optional[int] = None,
) -> RepairOutcome:
    """Turns any solution into a feasible one"""
    if not spec.constrained:
        return RepairOutcome(s, None, (), 0)
    if model is None:
        model = build_assembly_model(spec)
    if node_budget is None:
        node_budget = config.CP_NODE_BUDGET
    values = s.values

    assignment, nodes = _remove_stage(model, values, node_budget)
    stage = RepairStage.REMOVE_COMPONENTS
    if assignment is None:
        log.debug("Removing components can't fix the solution, adding components")
        assignment, more = _add_stage(model, values, seed, node_budget)
        nodes += more
        stage = RepairStage.ADD_COMPONENTS
    if assignment is None:
        raise RepairFailed("Neither removing nor adding components gives a feasible solution")

    solved = list(model.to_values(assignment))
    # joint codes come from stage 3, starting from the input codes
    for i in range(1, spec.n_joints + 1):
        y = spec.joint_var(i)
        solved[y] = values[y]
    fixed, retyped = assign_joints(spec, solved)
    repaired = make_solution(spec, fixed)
    violations = is_feasible(spec, repaired)
    if violations:
        raise RepairFailed(
            "Repaired solution still breaks %s" % ", ".join(str(v) for v in violations)
        )
    log.debug(
        "Repair: %s, %d joints retyped, %d nodes", stage.value, len(retyped), nodes
    )
    return RepairOutcome(repaired, stage, retyped, nodes)
