"""Repeated runs of several algorithms on one problem"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from assembly import ProblemSpec
from eda import AlgoConfig, RunHistory, run
from workspace import fpath, maybe_mkdir
from .core import UsageError

log = logging.getLogger(__name__)

CURVE_COLUMNS = ["algorithm", "iteration", "mean_best_fitness", "std_best_fitness", "runs", "mean_evals"]
RUN_COLUMNS = ["algorithm", "run", "seed", "best_fitness", "evals", "evals_to_target", "median_evals_to_target"]


def run_seed(base_seed: int, run_index: int) -> int:
    """Seed of one compare run, re-run it alone with `run --seed`"""
    return base_seed + run_index


@dataclass
class CompareReport:
    algorithms: List[str]
    runs: int
    # one row per algorithm and iteration
    curves: pd.DataFrame
    # one row per run
    per_run: pd.DataFrame
    total_evaluations: int
    target: Optional[float] = None

    def median_evals_to_target(self) -> Dict[str, float]:
        """Median over runs, runs that never reached the target count as infinite"""
        res = {}
        for algo in self.algorithms:
            vals = self.per_run.loc[self.per_run["algorithm"] == algo, "evals_to_target"]
            res[algo] = float(np.median(vals.fillna(np.inf).to_numpy(dtype=float)))
        return res

    def write(self, out: str) -> List[str]:
        maybe_mkdir(out)
        curves = fpath(out, "compare.csv")
        self.curves.to_csv(curves, index=False)
        runs = fpath(out, "compare_runs.csv")
        self.per_run.to_csv(runs, index=False)
        return [curves, runs]


def _padded(history: RunHistory, iterations: int) -> pd.DataFrame:
    """History frame extended to the full budget, runs stopped early keep their last values"""
    frame = history.to_frame().set_index("iteration")
    frame = frame.reindex(range(iterations + 1)).ffill()
    return frame.reset_index()


def compare(
    spec: ProblemSpec,
    evaluator,
    algorithms: Sequence[str],
    runs: int,
    base_seed: int = 0,
    pool=None,
    target: Optional[float] = None,
    **settings,
) -> CompareReport:
    """
    Runs every algorithm `runs` times with seeds base_seed + run index.
    All algorithms share the same settings (population, budget, ...).
    """
    algorithms = list(algorithms)
    if not algorithms:
        raise UsageError("At least one algorithm is required")
    if len(set(algorithms)) != len(algorithms):
        raise UsageError("Algorithms are listed twice")
    if runs < 1:
        raise UsageError("At least one run per algorithm is required")
    if target is None and hasattr(evaluator, "optimum"):
        target = evaluator.optimum()

    frames = []
    rows = []
    total = 0
    for algo in algorithms:
        for r in range(runs):
            seed = run_seed(base_seed, r)
            cfg = AlgoConfig.from_defaults(algorithm=algo, seed=seed, **settings)
            history = run(spec, cfg, evaluator, pool)
            total += history.evaluations
            frame = _padded(history, cfg.iteration_budget)
            frame["algorithm"] = algo
            frame["run"] = r
            frames.append(frame)
            rows.append(
                {
                    "algorithm": algo,
                    "run": r,
                    "seed": seed,
                    "best_fitness": history.best_fitness,
                    "evals": history.evaluations,
                    "evals_to_target": (
                        history.evaluations_to_target(target) if target is not None else None
                    ),
                }
            )
            log.info("%s run %d (seed %d): best %.6g", algo, r, seed, history.best_fitness)

    data = pd.concat(frames, ignore_index=True)
    grouped = data.groupby(["algorithm", "iteration"], sort=False)
    curves = grouped.agg(
        mean_best_fitness=("best_fitness", "mean"),
        std_best_fitness=("best_fitness", lambda v: float(np.std(v.to_numpy()))),
        runs=("best_fitness", "size"),
        mean_evals=("evals", "mean"),
    ).reset_index()[CURVE_COLUMNS]

    per_run = pd.DataFrame(rows)
    per_run["evals_to_target"] = per_run["evals_to_target"].astype(float)
    report = CompareReport(algorithms, runs, curves, per_run, total, target)
    medians = report.median_evals_to_target()
    per_run["median_evals_to_target"] = per_run["algorithm"].map(medians)
    report.per_run = per_run[RUN_COLUMNS]
    for algo, med in medians.items():
        log.info("%s: median evaluations to target %s", algo, med)
    return report
