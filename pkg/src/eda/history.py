"""Per-iteration records of a run"""
from dataclasses import dataclass, field
from typing import List, Optional

import pandas as pd

from assembly import Solution
from .model import DependencyStats, ProbabilityModel

HISTORY_COLUMNS = ["iteration", "best_fitness", "mean_fitness", "evals", "wall_ms"]


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    # best so far, not of this population only
    best_fitness: float
    mean_fitness: float
    evaluations: int
    wall_ms: float


@dataclass
class ModelSnapshot:
    iteration: int
    model: ProbabilityModel
    stats: DependencyStats


@dataclass
class RunHistory:
    algorithm: str
    seed: int
    spec_digest: str
    config: dict
    evaluator: str = ""
    records: List[IterationRecord] = field(default_factory=list)
    best: Optional[Solution] = None
    best_fitness: float = float("inf")
    snapshots: List[ModelSnapshot] = field(default_factory=list)
    stats: Optional[DependencyStats] = None

    def record(self, iteration, mean_fitness, evaluations, wall_ms):
        self.records.append(
            IterationRecord(iteration, self.best_fitness, float(mean_fitness), evaluations, wall_ms)
        )

    def offer(self, s: Solution, fitness: float) -> bool:
        """Keeps s if it beats the best so far"""
        if self.best is None or fitness < self.best_fitness:
            self.best = s
            self.best_fitness = float(fitness)
            return True
        return False

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def evaluations(self) -> int:
        return self.records[-1].evaluations if self.records else 0

    def evaluations_to_target(self, target: float, tol: float = 1e-9) -> Optional[int]:
        """Evaluations used when the best fitness first reached the target"""
        for rec in self.records:
            if rec.best_fitness <= target + tol:
                return rec.evaluations
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (r.iteration, r.best_fitness, r.mean_fitness, r.evaluations, r.wall_ms)
                for r in self.records
            ],
            columns=HISTORY_COLUMNS,
        )
