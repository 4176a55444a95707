"""Problem description: joints, components, environment objects and type rules"""
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from helpers import canonical_json, tagged_hash
from .core import Envo, SpecError, VariableIndex, VariableKind

log = logging.getLogger(__name__)

DEGREE_RULES = ("count", "literal-sum")
REQUIRED_FIELDS = ("n_joints", "joint_types", "component_types")


@dataclass(frozen=True)
class ProblemSpec:
    n_joints: int
    n_joint_types: int
    n_component_types: int
    envos: Tuple[Envo, ...]
    type_rules: Tuple[Tuple[int, int], ...]
    fitness_id: str
    fitness_params: dict = field(compare=False, hash=False)
    variables: Tuple[VariableIndex, ...] = field(repr=False)
    name: str = "problem"
    # False for benchmark problems without configuration constraints
    constrained: bool = True
    # how the "at least two components" rule is read
    degree_rule: str = "count"

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @cached_property
    def envo_of(self) -> Dict[int, int]:
        """joint (1-based) -> envo position"""
        res = {}
        for m, envo in enumerate(self.envos):
            for j in envo.joints:
                res[j] = m
        return res

    @cached_property
    def free_joints(self) -> List[int]:
        return [i for i in range(1, self.n_joints + 1) if i not in self.envo_of]

    @cached_property
    def component_of(self) -> Dict[Tuple[int, int], int]:
        """(i, j) with i < j -> flat index"""
        return {v.pair: v.flat_index for v in self.variables if not v.is_joint}

    @cached_property
    def components(self) -> List[VariableIndex]:
        return [v for v in self.variables if not v.is_joint]

    def joint_var(self, i: int) -> int:
        """Flat index of joint i (1-based)"""
        return i - 1

    def component_var(self, i: int, j: int) -> Optional[int]:
        """Flat index of the component between i and j, None if excluded"""
        if i > j:
            i, j = j, i
        return self.component_of.get((i, j))

    @cached_property
    def incident(self) -> Dict[int, List[int]]:
        """joint -> flat indices of its component variables"""
        res = {i: [] for i in range(1, self.n_joints + 1)}
        for v in self.components:
            res[v.pair[0]].append(v.flat_index)
            res[v.pair[1]].append(v.flat_index)
        return res

    def domain(self, flat_index: int) -> range:
        if self.variables[flat_index].is_joint:
            return range(self.n_joint_types + 1)
        return range(self.n_component_types + 1)

    @cached_property
    def domain_sizes(self) -> np.ndarray:
        return np.array([len(self.domain(v.flat_index)) for v in self.variables], dtype=np.int64)

    @cached_property
    def labels(self) -> List[str]:
        return [v.label for v in self.variables]

    def same_envo(self, i: int, j: int) -> bool:
        m = self.envo_of.get(i)
        return m is not None and m == self.envo_of.get(j)

    def to_raw(self) -> dict:
        return {
            "name": self.name,
            "n_joints": self.n_joints,
            "joint_types": self.n_joint_types,
            "component_types": self.n_component_types,
            "envos": {e.name: sorted(e.joints) for e in self.envos},
            "type_rules": [list(r) for r in self.type_rules],
            "constrained": self.constrained,
            "degree_rule": self.degree_rule,
            "fitness": {"id": self.fitness_id, "params": self.fitness_params},
        }

    @cached_property
    def digest(self) -> str:
        return tagged_hash("problem-spec", canonical_json(self.to_raw()).encode()).hex()


def build_variables(n_joints: int, envo_of: Dict[int, int]) -> Tuple[VariableIndex, ...]:
    """Joints first in ascending order, then components in (i, j) order"""
    variables = [
        VariableIndex(VariableKind.JOINT, i - 1, joint=i) for i in range(1, n_joints + 1)
    ]
    for i in range(1, n_joints + 1):
        for j in range(i + 1, n_joints + 1):
            m = envo_of.get(i)
            # no component between two joints of the same envo
            if m is not None and m == envo_of.get(j):
                continue
            variables.append(VariableIndex(VariableKind.COMPONENT, len(variables), pair=(i, j)))
    return tuple(variables)


def _positive_int(raw, key):
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SpecError("%s must be a positive integer, got %r" % (key, value))
    return value


def build_spec(raw: dict) -> ProblemSpec:
    """Validates a structured problem description and builds the variable index"""
    if not isinstance(raw, dict):
        raise SpecError("Problem description must be an object")
    missing = [k for k in REQUIRED_FIELDS if k not in raw]
    if missing:
        raise SpecError("Missing fields: %s" % ", ".join(missing))
    if raw["n_joints"] == 0:
        raise SpecError("Empty joint set")
    n = _positive_int(raw, "n_joints")
    v = _positive_int(raw, "joint_types")
    w = _positive_int(raw, "component_types")

    envos = []
    seen = {}
    for name, members in (raw.get("envos") or {}).items():
        joints = []
        for j in members:
            if isinstance(j, bool) or not isinstance(j, int) or not 1 <= j <= n:
                raise SpecError("Envo %s: joint %r is out of range 1..%d" % (name, j, n))
            if j in seen:
                raise SpecError("Envos %s and %s overlap at joint %d" % (seen[j], name, j))
            seen[j] = name
            joints.append(j)
        if not joints:
            raise SpecError("Envo %s has no joints" % name)
        envos.append(Envo(name, frozenset(joints)))

    rules = []
    for rule in raw.get("type_rules") or []:
        if len(rule) != 2:
            raise SpecError("Type rule must be a [joint_type, component_type] pair: %r" % (rule,))
        g, h = rule
        if not 1 <= g <= v:
            raise SpecError("Type rule joint type %r is out of range 1..%d" % (g, v))
        if not 1 <= h <= w:
            raise SpecError("Type rule component type %r is out of range 1..%d" % (h, w))
        rules.append((g, h))

    degree_rule = raw.get("degree_rule", "count")
    if degree_rule not in DEGREE_RULES:
        raise SpecError("Unknown degree rule %r" % degree_rule)

    fitness = raw.get("fitness") or {}
    envo_of = {j: m for m, e in enumerate(envos) for j in e.joints}
    spec = ProblemSpec(
        n_joints=n,
        n_joint_types=v,
        n_component_types=w,
        envos=tuple(envos),
        type_rules=tuple(rules),
        fitness_id=fitness.get("id", "none"),
        fitness_params=dict(fitness.get("params") or {}),
        variables=build_variables(n, envo_of),
        name=raw.get("name", "problem"),
        constrained=bool(raw.get("constrained", True)),
        degree_rule=degree_rule,
    )
    log.debug(
        "Built spec %s: %d joints, %d components", spec.name, n, spec.n_variables - n
    )
    return spec


def load_spec(fname: str, **overrides) -> ProblemSpec:
    """Loads a problem file, top-level keys can be overridden"""
    try:
        with open(fname, "r") as f:
            raw = json.load(f)
    except (OSError, ValueError) as e:
        raise SpecError("Can't read problem file %s: %s" % (fname, e))
    raw.update(overrides)
    return build_spec(raw)
