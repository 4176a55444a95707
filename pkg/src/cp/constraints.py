"""
Constraint kinds understood by the solver.

Every constraint has a `scope` of variable handles and implements:
- `validate(problem)` - parameter checks at registration
- `propagate(doms)` - filters the domains list in place,
  returns changed handles, raises Wipeout
- `check(values)` - naive evaluation on a complete assignment
"""
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .core import EmptyDomain, MalformedConstraint, Wipeout


def narrow(doms: list, handle: int, keep) -> bool:
    """Keeps values of doms[handle] for which keep(v) is true"""
    dom = doms[handle]
    new = tuple(v for v in dom if keep(v))
    if len(new) == len(dom):
        return False
    if not new:
        raise Wipeout(handle)
    doms[handle] = new
    return True


def _status(dom: Tuple[int, ...], values: frozenset) -> Optional[bool]:
    """True if every value is in the set, False if none is, None otherwise"""
    inside = sum(1 for v in dom if v in values)
    if inside == len(dom):
        return True
    if inside == 0:
        return False
    return None


class Constraint:
    KIND = "Constraint"
    scope: Tuple[int, ...] = ()

    def validate(self, problem):
        if not self.scope:
            raise MalformedConstraint("%s with an empty scope" % self.KIND)

    def on_register(self, problem):
        pass

    def propagate(self, doms: list) -> List[int]:
        return []

    def check(self, values: Sequence[int]) -> bool:
        raise NotImplementedError()

    def __repr__(self):
        return "%s(%s)" % (self.KIND, ", ".join(str(h) for h in self.scope))


class FixValue(Constraint):
    KIND = "FixValue"

    def __init__(self, var: int, value: int):
        self.var = var
        self.value = int(value)
        self.scope = (var,)

    def validate(self, problem):
        super().validate(problem)
        if self.value not in problem.variables[self.var].initial_domain:
            raise MalformedConstraint(
                "Value %d is not in the domain of %s" % (self.value, problem.variables[self.var].name)
            )

    def on_register(self, problem):
        var = problem.variables[self.var]
        if self.value not in var.domain:
            raise EmptyDomain("Fixing %s to %d leaves no values" % (var.name, self.value))
        var.domain = (self.value,)

    def propagate(self, doms):
        if narrow(doms, self.var, lambda v: v == self.value):
            return [self.var]
        return []

    def check(self, values):
        return values[self.var] == self.value


class SumGreaterThan(Constraint):
    """
    sum(term(x) for x in terms) > bound, where term(x) is x itself
    or [x != 0] when count_nonzero is set.
    With a guard variable the constraint only applies when the guard is non-zero.
    """

    KIND = "SumGreaterThan"

    def __init__(
        self,
        terms: Iterable[int],
        bound: int,
        count_nonzero: bool = False,
        guard: Optional[int] = None,
    ):
        self.terms = tuple(terms)
        self.bound = bound
        self.count_nonzero = count_nonzero
        self.guard = guard
        self.scope = self.terms + (() if guard is None else (guard,))

    def validate(self, problem):
        super().validate(problem)
        if not self.terms:
            raise MalformedConstraint("SumGreaterThan needs at least one term")
        if self.guard is not None and self.guard in self.terms:
            raise MalformedConstraint("Guard variable can't be one of the terms")

    def term(self, v: int) -> int:
        if self.count_nonzero:
            return 1 if v != 0 else 0
        return v

    def propagate(self, doms):
        maxs = [max(self.term(v) for v in doms[h]) for h in self.terms]
        total_max = sum(maxs)
        changed = []
        if self.guard is not None:
            gdom = doms[self.guard]
            if 0 in gdom:
                if total_max <= self.bound and narrow(doms, self.guard, lambda v: v == 0):
                    changed.append(self.guard)
                # guard may still be off, nothing to filter
                return changed
        if total_max <= self.bound:
            raise Wipeout(self.terms[0])
        for h, hmax in zip(self.terms, maxs):
            rest = total_max - hmax
            if narrow(doms, h, lambda v: self.term(v) + rest > self.bound):
                changed.append(h)
        return changed

    def check(self, values):
        if self.guard is not None and values[self.guard] == 0:
            return True
        return sum(self.term(values[h]) for h in self.terms) > self.bound


class ConditionalEquivalence(Constraint):
    """
    [x_1 in S_1] and ... and [x_k in S_k]  <=>  [x_t in T]
    With one_way set only the forward implication holds.
    """

    KIND = "ConditionalEquivalence"

    def __init__(self, conditions, target, one_way: bool = False):
        self.conditions = tuple((h, frozenset(vals)) for h, vals in conditions)
        self.target = (target[0], frozenset(target[1]))
        self.one_way = one_way
        self.scope = tuple(h for h, _ in self.conditions) + (self.target[0],)

    def validate(self, problem):
        super().validate(problem)
        if not self.conditions:
            raise MalformedConstraint("ConditionalEquivalence needs at least one condition")
        if any(not vals for _, vals in self.conditions) or not self.target[1]:
            raise MalformedConstraint("ConditionalEquivalence with an empty value set")

    def propagate(self, doms):
        changed = []
        states = [_status(doms[h], vals) for h, vals in self.conditions]
        t, tvals = self.target
        if all(s is True for s in states):
            if narrow(doms, t, lambda v: v in tvals):
                changed.append(t)
        elif not self.one_way and any(s is False for s in states):
            if narrow(doms, t, lambda v: v not in tvals):
                changed.append(t)
        tstate = _status(doms[t], tvals)
        if tstate is False:
            unknown = [k for k, s in enumerate(states) if s is None]
            if len(unknown) == 1 and all(s is not False for s in states):
                h, vals = self.conditions[unknown[0]]
                if narrow(doms, h, lambda v: v not in vals):
                    changed.append(h)
        elif tstate is True and not self.one_way:
            for h, vals in self.conditions:
                if narrow(doms, h, lambda v: v in vals):
                    changed.append(h)
        return changed

    def check(self, values):
        cond = all(values[h] in vals for h, vals in self.conditions)
        target = values[self.target[0]] in self.target[1]
        if self.one_way:
            return target or not cond
        return cond == target


class CountEquivalence(Constraint):
    """[x_t in T]  <=>  #{k: x_k in H} > threshold"""

    KIND = "CountEquivalence"

    def __init__(
        self,
        target: int,
        target_values: Iterable[int],
        terms: Iterable[int],
        term_values: Iterable[int],
        threshold: int = 0,
    ):
        self.target = target
        self.target_values = frozenset(target_values)
        self.terms = tuple(terms)
        self.term_values = frozenset(term_values)
        self.threshold = threshold
        self.scope = self.terms + (target,)

    def validate(self, problem):
        super().validate(problem)
        if not self.target_values or not self.term_values:
            raise MalformedConstraint("CountEquivalence with an empty value set")
        if self.target in self.terms:
            raise MalformedConstraint("CountEquivalence target can't be one of the terms")

    def propagate(self, doms):
        changed = []
        hv, tv = self.term_values, self.target_values
        states = [_status(doms[h], hv) for h in self.terms]
        lo = sum(1 for s in states if s is True)
        hi = sum(1 for s in states if s is not False)
        if lo > self.threshold:
            if narrow(doms, self.target, lambda v: v in tv):
                changed.append(self.target)
        elif hi <= self.threshold:
            if narrow(doms, self.target, lambda v: v not in tv):
                changed.append(self.target)
        tstate = _status(doms[self.target], tv)
        if tstate is True and hi == self.threshold + 1:
            # every term that can count has to
            for h, s in zip(self.terms, states):
                if s is None and narrow(doms, h, lambda v: v in hv):
                    changed.append(h)
        elif tstate is False and lo == self.threshold:
            for h, s in zip(self.terms, states):
                if s is None and narrow(doms, h, lambda v: v not in hv):
                    changed.append(h)
        return changed

    def check(self, values):
        count = sum(1 for h in self.terms if values[h] in self.term_values)
        return (values[self.target] in self.target_values) == (count > self.threshold)


class PathMatrixConnectivity(Constraint):
    """
    Global connectivity of the active structure.

    `joints` maps joint number to the handle of its type variable,
    `groups` maps envo members to their group, members of one group count as
    directly connected. `edges` lists (handle, i, j) component variables.
    A joint is required when it is active or carries a component, every
    group is always required. All required vertices have to be connected
    by non-zero components.
    """

    KIND = "PathMatrixConnectivity"

    def __init__(
        self,
        joints: Dict[int, int],
        edges: Iterable[Tuple[int, int, int]],
        groups: Optional[Dict[int, int]] = None,
    ):
        self.joints = dict(joints)
        self.edges = tuple(edges)
        self.groups = dict(groups or {})
        self.n_groups = len(set(self.groups.values()))
        self.free = [i for i in sorted(self.joints) if i not in self.groups]
        self.scope = tuple(self.joints[i] for i in sorted(self.joints)) + tuple(
            h for h, _, _ in self.edges
        )

    def validate(self, problem):
        super().validate(problem)
        for h, i, j in self.edges:
            if i not in self.joints or j not in self.joints:
                raise MalformedConstraint("Edge (%d, %d) has an unknown endpoint" % (i, j))
            if i == j:
                raise MalformedConstraint("Edge (%d, %d) is a loop" % (i, j))
        for i in self.groups:
            if i not in self.joints:
                raise MalformedConstraint("Group member %d is not a joint" % i)

    def node(self, i: int):
        g = self.groups.get(i)
        return ("group", g) if g is not None else ("joint", i)

    def _connected(self, edge_on, required) -> bool:
        required = list(required)
        if len(required) < 2:
            return True
        graph = nx.Graph()
        graph.add_nodes_from(required)
        graph.add_edges_from(
            (self.node(i), self.node(j)) for h, i, j in self.edges if edge_on(h)
        )
        reached = nx.node_connected_component(graph, required[0])
        return all(n in reached for n in required)

    def _required(self, active, carrying):
        required = [("group", g) for g in sorted(set(self.groups.values()))]
        for i in self.free:
            if active(self.joints[i]) or i in carrying:
                required.append(("joint", i))
        return required

    def propagate(self, doms):
        # optimistic graph: every component that may still be non-zero,
        # required vertices are the ones that are active in every completion
        carrying = set()
        for h, i, j in self.edges:
            if 0 not in doms[h]:
                carrying.update((i, j))
        required = self._required(lambda h: 0 not in doms[h], carrying)
        if not self._connected(lambda h: doms[h][-1] != 0, required):
            raise Wipeout(self.scope[0])
        return []

    def check(self, values):
        carrying = set()
        for h, i, j in self.edges:
            if values[h] != 0:
                carrying.update((i, j))
        required = self._required(lambda h: values[h] != 0, carrying)
        return self._connected(lambda h: values[h] != 0, required)
