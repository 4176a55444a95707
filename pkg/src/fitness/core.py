"""Base classes for inheritance"""
from typing import Optional

from assembly import ProblemSpec, Solution
from errors import BaseError


class FitnessError(BaseError):
    NAME = "Fitness error"


class DivergedSimulation(FitnessError):
    NAME = "Simulation diverged"


class Evaluator:
    # id used in problem files: "fitness": {"id": ...}
    ID = None
    # shown in logs and run histories
    LABEL = "evaluator"

    def __init__(self, spec: ProblemSpec, params: Optional[dict] = None):
        self.spec = spec
        self.params = dict(spec.fitness_params if params is None else params)

    def __call__(self, s: Solution) -> float:
        """Fitness of a solution, lower is better"""
        raise NotImplementedError()

    def optimum(self) -> Optional[float]:
        """Known global minimum if there is one"""
        return None
