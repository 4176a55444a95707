from .core import (
    CpError,
    EmptyDomain,
    MalformedConstraint,
    UnknownVariable,
    ProblemSealed,
    BudgetExhausted,
    Wipeout,
    CpVariable,
    CpProblem,
    add_variable,
    add_constraint,
)
from .constraints import (
    Constraint,
    FixValue,
    SumGreaterThan,
    ConditionalEquivalence,
    CountEquivalence,
    PathMatrixConnectivity,
)
from .search import (
    ValueOrder,
    VariableOrder,
    SearchStrategy,
    SearchResult,
    MIN_VALUE,
    MAX_VALUE,
    propagate,
    solve,
    count_solutions,
    enumerate_solutions,
)
