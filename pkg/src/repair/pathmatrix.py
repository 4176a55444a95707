"""
Literal path-matrix encoding of connectivity, used to cross-check
the global connectivity constraint on small problems.

a(i, j, k) = 1 iff a walk of exactly k edges joins joints i and j.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from assembly import ProblemSpec, is_connected
from cp import (
    ConditionalEquivalence,
    CountEquivalence,
    CpProblem,
    FixValue,
    PathMatrixConnectivity,
    SumGreaterThan,
    solve,
)
import rng
from .core import EncodingError

log = logging.getLogger(__name__)

MAX_LITERAL_JOINTS = 6


@dataclass
class PathMatrix:
    n: int
    # (i, j, k) with i < j -> 0/1
    entries: Dict[Tuple[int, int, int], int]

    def entry(self, i: int, j: int, k: int) -> int:
        if i == j:
            raise EncodingError("Diagonal entries are unused")
        if i > j:
            i, j = j, i
        return self.entries[(i, j, k)]

    def reachable(self, i: int, j: int) -> bool:
        return any(self.entry(i, j, k) for k in range(1, self.n))


def required_joints(spec: ProblemSpec, values: Sequence[int]) -> List[int]:
    """Envo members plus free joints that are active or carry a component"""
    res = []
    for i in range(1, spec.n_joints + 1):
        if i in spec.envo_of or values[spec.joint_var(i)] != 0:
            res.append(i)
        elif any(values[c] != 0 for c in spec.incident[i]):
            res.append(i)
    return res


def build_literal_problem(spec: ProblemSpec, values: Sequence[int]):
    """Path-matrix problem with components fixed to the given values"""
    n = spec.n_joints
    problem = CpProblem("%s-literal" % spec.name)
    z = {}
    for v in spec.components:
        z[v.pair] = problem.add_variable(spec.domain(v.flat_index), v.label)
        problem.add_constraint(FixValue(z[v.pair], values[v.flat_index]))
    nonzero = range(1, spec.n_component_types + 1)

    a = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(1, n):
                a[(i, j, k)] = problem.add_variable([0, 1], "a(%d,%d,%d)" % (i, j, k))

    def A(i, j, k):
        return a[(i, j, k)] if i < j else a[(j, i, k)]

    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if spec.same_envo(i, j):
                problem.add_constraint(FixValue(A(i, j, 1), 1))
            else:
                problem.add_constraint(
                    ConditionalEquivalence([(z[(i, j)], nonzero)], (A(i, j, 1), [1]))
                )
            for k in range(2, n):
                steps = []
                for l in range(1, n + 1):
                    if l in (i, j):
                        continue
                    p = problem.add_variable([0, 1], "p(%d,%d,%d,%d)" % (i, j, k, l))
                    problem.add_constraint(
                        ConditionalEquivalence(
                            [(A(i, l, 1), [1]), (A(l, j, k - 1), [1])], (p, [1])
                        )
                    )
                    steps.append(p)
                problem.add_constraint(CountEquivalence(A(i, j, k), [1], steps, [1]))

    required = required_joints(spec, values)
    for x, i in enumerate(required):
        for j in required[x + 1 :]:
            problem.add_constraint(SumGreaterThan([A(i, j, k) for k in range(1, n)], 0))
    return problem, a


def literal_connected(spec: ProblemSpec, values: Sequence[int]) -> Tuple[bool, Optional[PathMatrix]]:
    """Connectivity verdict of the path-matrix encoding and the matrix itself"""
    if spec.n_joints > MAX_LITERAL_JOINTS:
        raise EncodingError(
            "Literal encoding is limited to %d joints, got %d" % (MAX_LITERAL_JOINTS, spec.n_joints)
        )
    problem, a = build_literal_problem(spec, values)
    res = solve(problem)
    if not res.is_sat:
        return False, None
    entries = {key: res.assignment[h] for key, h in a.items()}
    return True, PathMatrix(spec.n_joints, entries)


def global_connected(spec: ProblemSpec, values: Sequence[int]) -> bool:
    """Connectivity verdict of the global constraint on fixed values"""
    problem = CpProblem("%s-global" % spec.name)
    handles = [problem.add_variable(spec.domain(x), spec.labels[x]) for x in range(spec.n_variables)]
    for x, h in enumerate(handles):
        problem.add_constraint(FixValue(h, values[x]))
    problem.add_constraint(
        PathMatrixConnectivity(
            {i: handles[spec.joint_var(i)] for i in range(1, spec.n_joints + 1)},
            [(handles[v.flat_index], v.pair[0], v.pair[1]) for v in spec.components],
            groups=spec.envo_of,
        )
    )
    return solve(problem).is_sat


@dataclass
class EncodingReport:
    trials: int
    # (values, global verdict, literal verdict, oracle verdict)
    disagreements: List[Tuple[Tuple[int, ...], bool, bool, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def random_assignment(spec: ProblemSpec, gen) -> Tuple[int, ...]:
    """Random structure with a per-call component density"""
    density = gen.random()
    values = [0] * spec.n_variables
    for v in spec.components:
        if gen.random() < density:
            values[v.flat_index] = int(gen.integers(1, spec.n_component_types + 1))
    for i in range(1, spec.n_joints + 1):
        values[spec.joint_var(i)] = int(gen.integers(0, spec.n_joint_types + 1))
    return tuple(values)


def verify_encodings_agree(spec: ProblemSpec, trials: int, seed: int) -> EncodingReport:
    """Compares global constraint, path-matrix encoding and graph search on random assignments"""
    if spec.n_joints > MAX_LITERAL_JOINTS:
        raise EncodingError(
            "Literal encoding is limited to %d joints, got %d" % (MAX_LITERAL_JOINTS, spec.n_joints)
        )
    gen = rng.generator(seed, "encodings")
    report = EncodingReport(trials)
    for _ in range(trials):
        values = random_assignment(spec, gen)
        verdicts = (
            global_connected(spec, values),
            literal_connected(spec, values)[0],
            is_connected(spec, values),
        )
        if len(set(verdicts)) > 1:
            log.warning("Encodings disagree on %s: %s", list(values), verdicts)
            report.disagreements.append((values,) + verdicts)
    return report
