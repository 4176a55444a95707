import itertools
import os

from networkx.utils import UnionFind

from assembly import build_spec, load_spec, make_solution
import workspace

TEST_DIR = "testdir"
PROBLEMS_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", "problems"))


def clear_testdir():
    workspace.delete_recursively(TEST_DIR, include_self=True)


def problem_file(name):
    return os.path.join(PROBLEMS_DIR, name)


def suspension_spec(**overrides):
    return load_spec(problem_file("suspension.json"), **overrides)


def small_spec(n=4, envos=None, joint_types=2, component_types=2, type_rules=((2, 2),), **extra):
    """Assembly problem with a dummy fitness"""
    raw = {
        "name": "small",
        "n_joints": n,
        "joint_types": joint_types,
        "component_types": component_types,
        "envos": envos if envos is not None else {"base": [1], "tip": [2]},
        "type_rules": [list(r) for r in type_rules],
        "fitness": {"id": "onemax", "params": {}},
    }
    raw.update(extra)
    return build_spec(raw)


def values_with(spec, joints=None, components=None):
    """Flat values from {joint: code} and {(i, j): code}"""
    values = [0] * spec.n_variables
    for i, code in (joints or {}).items():
        values[spec.joint_var(i)] = code
    for pair, code in (components or {}).items():
        values[spec.component_var(*pair)] = code
    return values


def four_beam_solution(spec, extra=None):
    """Feasible suspension: one beam from every wheel joint to two chassis joints"""
    components = {(1, 5): 1, (2, 5): 1, (3, 6): 1, (4, 6): 1}
    components.update(extra or {})
    joints = {i: 1 for i in range(1, 7)}
    return make_solution(spec, values_with(spec, joints, components))


def all_assignments(spec):
    return itertools.product(*[spec.domain(x) for x in range(spec.n_variables)])


def union_find_connected(spec, values):
    """Connectivity by union-find, independent of the graph search oracle"""
    uf = UnionFind()
    required = []
    for m, envo in enumerate(spec.envos):
        members = sorted(envo.joints)
        required.append(members[0])
        uf.union(*members)
    for i in spec.free_joints:
        carrying = any(values[c] != 0 for c in spec.incident[i])
        if values[spec.joint_var(i)] != 0 or carrying:
            required.append(i)
    for v in spec.components:
        if values[v.flat_index] != 0:
            uf.union(*v.pair)
    if len(required) < 2:
        return True
    root = uf[required[0]]
    return all(uf[i] == root for i in required)
