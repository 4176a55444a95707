"""Propagation to fixpoint and chronological backtracking"""
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .core import BudgetExhausted, CpError, CpProblem, Wipeout

log = logging.getLogger(__name__)


class ValueOrder(Enum):
    ASSIGN_MIN_VALUE = "min"
    ASSIGN_MAX_VALUE = "max"
    ASSIGN_RANDOM_VALUE = "random"


class VariableOrder(Enum):
    DECLARATION_ORDER = "declaration"
    RANDOM_ORDER = "random"


@dataclass(frozen=True)
class SearchStrategy:
    value_order: ValueOrder = ValueOrder.ASSIGN_MIN_VALUE
    variable_order: VariableOrder = VariableOrder.DECLARATION_ORDER
    rng_seed: Optional[int] = None

    def __post_init__(self):
        if self.uses_rng and self.rng_seed is None:
            raise CpError("Random search options need a seed")

    @property
    def uses_rng(self) -> bool:
        return (
            self.value_order is ValueOrder.ASSIGN_RANDOM_VALUE
            or self.variable_order is VariableOrder.RANDOM_ORDER
        )


MIN_VALUE = SearchStrategy(ValueOrder.ASSIGN_MIN_VALUE)
MAX_VALUE = SearchStrategy(ValueOrder.ASSIGN_MAX_VALUE)


@dataclass
class SearchResult:
    # None means Unsat
    assignment: Optional[Tuple[int, ...]]
    nodes: int

    @property
    def is_sat(self) -> bool:
        return self.assignment is not None


def propagate(problem: CpProblem, doms: list, changed: Optional[List[int]] = None):
    """
    Runs constraint filtering until nothing changes.
    Only constraints watching the changed handles are queued,
    all of them when changed is None.
    """
    constraints = problem.constraints
    watchers = problem.watchers
    if changed is None:
        queue = deque(range(len(constraints)))
    else:
        queue = deque(sorted({pos for h in changed for pos in watchers[h]}))
    queued = set(queue)
    while queue:
        pos = queue.popleft()
        queued.discard(pos)
        for h in constraints[pos].propagate(doms):
            for other in watchers[h]:
                if other not in queued:
                    queued.add(other)
                    queue.append(other)


class _Search:
    def __init__(self, problem: CpProblem, strategy: SearchStrategy, node_budget=None):
        self.problem = problem
        self.strategy = strategy
        self.node_budget = node_budget
        self.nodes = 0
        self.rng = np.random.default_rng(strategy.rng_seed) if strategy.uses_rng else None
        n = len(problem.variables)
        if strategy.variable_order is VariableOrder.RANDOM_ORDER:
            self.order = [int(h) for h in self.rng.permutation(n)]
        else:
            self.order = list(range(n))

    def trace(self, msg, *args):
        if self.problem.trace:
            log.debug("[%s] " + msg, self.problem.name, *args)

    def values_for(self, dom):
        order = self.strategy.value_order
        if order is ValueOrder.ASSIGN_MAX_VALUE:
            return dom[::-1]
        if order is ValueOrder.ASSIGN_RANDOM_VALUE:
            return [dom[k] for k in self.rng.permutation(len(dom))]
        return dom

    def next_variable(self, doms):
        for h in self.order:
            if len(doms[h]) > 1:
                return h
        return None

    def run(self, doms, on_solution, depth=0) -> bool:
        """Depth-first search, returns True when on_solution asks to stop"""
        h = self.next_variable(doms)
        if h is None:
            values = tuple(d[0] for d in doms)
            if not self.problem.check(values):
                # propagators are exact on fixed scopes, this is a bug if it happens
                log.warning("Propagated assignment fails the final check in %s", self.problem.name)
                return False
            return on_solution(values)
        for v in self.values_for(doms[h]):
            self.nodes += 1
            if self.node_budget is not None and self.nodes > self.node_budget:
                raise BudgetExhausted(
                    "%s: more than %d search nodes" % (self.problem.name, self.node_budget)
                )
            child = list(doms)
            child[h] = (v,)
            self.trace("%sdecide %s = %d", "  " * depth, self.problem.variables[h].name, v)
            try:
                propagate(self.problem, child, [h])
            except Wipeout as e:
                self.trace(
                    "%swipeout on %s, backtrack", "  " * depth, self.problem.variables[e.var].name
                )
                continue
            if self.run(child, on_solution, depth + 1):
                return True
        return False


def _root(problem: CpProblem, search: _Search):
    problem.seal()
    doms = problem.root_domains()
    try:
        propagate(problem, doms)
    except Wipeout as e:
        search.trace("root wipeout on %s", problem.variables[e.var].name)
        return None
    return doms


def solve(
    problem: CpProblem, strategy: SearchStrategy = MIN_VALUE, node_budget: Optional[int] = None
) -> SearchResult:
    """First assignment in search order satisfying every constraint, or Unsat"""
    search = _Search(problem, strategy, node_budget)
    doms = _root(problem, search)
    if doms is None:
        return SearchResult(None, 0)
    found = []

    def on_solution(values):
        found.append(values)
        return True

    search.run(doms, on_solution)
    result = SearchResult(found[0] if found else None, search.nodes)
    log.debug(
        "%s: %s after %d nodes", problem.name, "sat" if result.is_sat else "unsat", result.nodes
    )
    return result


def count_solutions(problem: CpProblem, limit: Optional[int] = None) -> int:
    """Enumerates satisfying assignments, stops at limit"""
    search = _Search(problem, MIN_VALUE)
    doms = _root(problem, search)
    if doms is None:
        return 0
    counter = [0]

    def on_solution(values):
        counter[0] += 1
        return limit is not None and counter[0] >= limit

    search.run(doms, on_solution)
    return counter[0]


def enumerate_solutions(problem: CpProblem, limit: Optional[int] = None) -> List[Tuple[int, ...]]:
    search = _Search(problem, MIN_VALUE)
    doms = _root(problem, search)
    if doms is None:
        return []
    res = []

    def on_solution(values):
        res.append(values)
        return limit is not None and len(res) >= limit

    search.run(doms, on_solution)
    return res
