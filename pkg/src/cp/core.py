"""Finite-domain variables, problems and solver errors"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from errors import BaseError

log = logging.getLogger(__name__)


class CpError(BaseError):
    NAME = "Constraint solver error"


class EmptyDomain(CpError):
    NAME = "Empty domain"


class MalformedConstraint(CpError):
    NAME = "Malformed constraint"


class UnknownVariable(CpError):
    NAME = "Unknown variable"


class ProblemSealed(CpError):
    NAME = "Problem is sealed"


class BudgetExhausted(CpError):
    NAME = "Search budget exhausted"


class Wipeout(Exception):
    """Raised by propagators when a domain becomes empty"""

    def __init__(self, var: int):
        super().__init__(var)
        self.var = var


@dataclass
class CpVariable:
    id: int
    initial_domain: Tuple[int, ...]
    # root domain, narrowed by FixValue and by restrict()
    domain: Tuple[int, ...]
    name: str = ""


def as_domain(values: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(set(int(v) for v in values)))


class CpProblem:
    """
    Variables and constraints of a finite-domain problem.
    Add everything first, then solve: the first solve seals the problem.
    """

    def __init__(self, name: str = "cp", trace: bool = False):
        self.name = name
        self.trace = trace
        self.variables: List[CpVariable] = []
        self.constraints = []
        self.sealed = False
        # variable handle -> positions of constraints watching it
        self._watchers: Optional[List[List[int]]] = None

    def add_variable(self, domain: Iterable[int], name: str = "") -> int:
        if self.sealed:
            raise ProblemSealed("Can't add variables to a sealed problem")
        dom = as_domain(domain)
        if not dom:
            raise EmptyDomain("Variable %s has an empty domain" % (name or len(self.variables)))
        if dom[0] < 0:
            raise CpError("Domain codes must be non-negative")
        handle = len(self.variables)
        self.variables.append(CpVariable(handle, dom, dom, name or "v%d" % handle))
        return handle

    def add_constraint(self, c):
        if self.sealed:
            raise ProblemSealed("Can't add constraints to a sealed problem")
        for h in c.scope:
            self.check_handle(h)
        c.validate(self)
        c.on_register(self)
        self.constraints.append(c)

    def check_handle(self, h):
        if isinstance(h, bool) or not isinstance(h, int) or not 0 <= h < len(self.variables):
            raise UnknownVariable("Unknown variable handle %r" % (h,))

    def restrict(self, handle: int, values: Iterable[int]):
        """Sets the root domain of a variable to values ∩ initial domain"""
        self.check_handle(handle)
        var = self.variables[handle]
        allowed = set(values)
        dom = tuple(v for v in var.initial_domain if v in allowed)
        if not dom:
            raise EmptyDomain("Restricting %s leaves no values" % var.name)
        var.domain = dom

    def seal(self):
        if self.sealed:
            return
        watchers = [[] for _ in self.variables]
        for pos, c in enumerate(self.constraints):
            for h in set(c.scope):
                watchers[h].append(pos)
        self._watchers = watchers
        self.sealed = True

    @property
    def watchers(self) -> List[List[int]]:
        self.seal()
        return self._watchers

    def copy(self) -> "CpProblem":
        """Same constraints with independent root domains"""
        other = CpProblem(self.name, self.trace)
        other.variables = [
            CpVariable(v.id, v.initial_domain, v.domain, v.name) for v in self.variables
        ]
        other.constraints = self.constraints
        other.sealed = self.sealed
        other._watchers = self._watchers
        return other

    def root_domains(self) -> List[Tuple[int, ...]]:
        return [v.domain for v in self.variables]

    def check(self, assignment) -> bool:
        """Naive post-hoc evaluation of every constraint"""
        if len(assignment) != len(self.variables):
            return False
        if any(a not in v.initial_domain for a, v in zip(assignment, self.variables)):
            return False
        return all(c.check(assignment) for c in self.constraints)

    def stats(self) -> Dict[str, int]:
        kinds = {}
        for c in self.constraints:
            kinds[c.KIND] = kinds.get(c.KIND, 0) + 1
        return kinds

    def __repr__(self):
        return "CpProblem(%s, %d vars, %d constraints)" % (
            self.name,
            len(self.variables),
            len(self.constraints),
        )


def add_variable(problem: CpProblem, domain: Iterable[int], name: str = "") -> int:
    return problem.add_variable(domain, name)


def add_constraint(problem: CpProblem, c):
    problem.add_constraint(c)
