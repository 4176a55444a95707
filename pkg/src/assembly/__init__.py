from .core import SpecError, SolutionError, VariableKind, VariableIndex, Envo
from .spec import ProblemSpec, build_spec, load_spec
from .solution import (
    Solution,
    Violation,
    ViolationKind,
    make_solution,
    is_feasible,
    is_connected,
    active_component_count,
    active_joint_count,
)
