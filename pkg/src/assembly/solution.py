"""Solutions and the brute-force feasibility oracle"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import networkx as nx

from .core import SolutionError
from .spec import ProblemSpec


@dataclass(frozen=True)
class Solution:
    """
    One assignment of all design variables in VariableIndex order.
    The first `n_joints` values are joint codes, the rest are component codes.
    """

    values: Tuple[int, ...]
    n_joints: int

    def __len__(self):
        return len(self.values)

    def __getitem__(self, idx):
        return self.values[idx]

    @property
    def joints(self) -> Tuple[int, ...]:
        return self.values[: self.n_joints]

    @property
    def components(self) -> Tuple[int, ...]:
        return self.values[self.n_joints :]

    def to_list(self) -> List[int]:
        return list(self.values)


def make_solution(spec: ProblemSpec, values: Sequence[int]) -> Solution:
    """Builds a solution checking its length and domains"""
    values = tuple(int(v) for v in values)
    if len(values) != spec.n_variables:
        raise SolutionError(
            "Solution has %d values, the problem has %d variables" % (len(values), spec.n_variables)
        )
    for idx, value in enumerate(values):
        if value not in spec.domain(idx):
            raise SolutionError(
                "Value %d of %s is out of its domain" % (value, spec.labels[idx])
            )
    return Solution(values, spec.n_joints)


class ViolationKind(Enum):
    DISCONNECTED = "Disconnected"
    UNDER_CONNECTED_JOINT = "UnderConnectedJoint"
    TYPE_RULE_BROKEN = "TypeRuleBroken"
    INACTIVE_JOINT_WITH_COMPONENTS = "InactiveJointWithComponents"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    # flat variable indices involved
    detail: Tuple[int, ...] = ()

    def __str__(self):
        return "%s%s" % (self.kind.value, list(self.detail))


def active_component_count(s: Solution) -> int:
    return sum(1 for v in s.components if v != 0)


def active_joint_count(s: Solution) -> int:
    return sum(1 for v in s.joints if v != 0)


def _node(spec: ProblemSpec, i: int):
    m = spec.envo_of.get(i)
    return ("envo", m) if m is not None else ("joint", i)


def connectivity_graph(spec: ProblemSpec, values: Sequence[int]):
    """
    Active-structure graph: envo groups collapsed to one vertex each,
    free joints that are active or carry a component, non-zero components as edges.
    Returns the graph and the list of vertices that must be connected.
    """
    g = nx.Graph()
    required = [("envo", m) for m in range(len(spec.envos))]
    for i in spec.free_joints:
        if values[spec.joint_var(i)] != 0 or any(values[c] != 0 for c in spec.incident[i]):
            required.append(("joint", i))
    g.add_nodes_from(required)
    for v in spec.components:
        if values[v.flat_index] != 0:
            g.add_edge(_node(spec, v.pair[0]), _node(spec, v.pair[1]))
    return g, required


def is_connected(spec: ProblemSpec, values: Sequence[int]) -> bool:
    g, required = connectivity_graph(spec, values)
    if len(required) < 2:
        return True
    reached = nx.node_connected_component(g, required[0])
    return all(node in reached for node in required)


def _disconnected_detail(spec, g, required):
    reached = nx.node_connected_component(g, required[0])
    detail = []
    for kind, idx in required:
        if (kind, idx) in reached:
            continue
        if kind == "envo":
            detail += [spec.joint_var(j) for j in sorted(spec.envos[idx].joints)]
        else:
            detail.append(spec.joint_var(idx))
    return tuple(sorted(detail))


def is_feasible(spec: ProblemSpec, s: Solution) -> List[Violation]:
    """Lists every broken configuration constraint, empty list means feasible"""
    if not spec.constrained:
        return []
    values = s.values
    violations = []

    g, required = connectivity_graph(spec, values)
    if len(required) > 1:
        reached = nx.node_connected_component(g, required[0])
        if not all(node in reached for node in required):
            violations.append(
                Violation(ViolationKind.DISCONNECTED, _disconnected_detail(spec, g, required))
            )

    for i in spec.free_joints:
        y = spec.joint_var(i)
        if values[y] == 0:
            continue
        incident = spec.incident[i]
        if spec.degree_rule == "count":
            ok = sum(1 for c in incident if values[c] != 0) >= 2
        else:
            ok = sum(values[c] for c in incident) > 1
        if not ok:
            violations.append(Violation(ViolationKind.UNDER_CONNECTED_JOINT, (y,)))

    for i in range(1, spec.n_joints + 1):
        y = spec.joint_var(i)
        for g_code, h_code in spec.type_rules:
            typed = [c for c in spec.incident[i] if values[c] == h_code]
            if (values[y] == g_code) != bool(typed):
                violations.append(
                    Violation(ViolationKind.TYPE_RULE_BROKEN, tuple([y] + typed))
                )

    for i in range(1, spec.n_joints + 1):
        y = spec.joint_var(i)
        if values[y] != 0:
            continue
        used = [c for c in spec.incident[i] if values[c] != 0]
        if used:
            violations.append(
                Violation(ViolationKind.INACTIVE_JOINT_WITH_COMPONENTS, tuple([y] + used))
            )
    return violations
