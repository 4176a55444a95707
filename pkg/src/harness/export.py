"""Run artifacts: history table, best solution, dependency graph, model series"""
import logging
from typing import List, Optional, Sequence

import numpy as np

from assembly import ProblemSpec, is_feasible
from eda import RunHistory
from helpers import write_json
from workspace import fpath, maybe_mkdir
from .core import HarnessError

log = logging.getLogger(__name__)

# settings that change how a run executes but never what it computes
RUNTIME_SETTINGS = ("jobs", "trace_cp")


def _label(labels: Optional[Sequence[str]], i: int) -> str:
    return labels[i] if labels is not None else "x%d" % i


def export_history(history: RunHistory, out: str) -> str:
    fname = fpath(out, "history.csv")
    history.to_frame().to_csv(fname, index=False)
    return fname


def export_best_solution(history: RunHistory, out: str, spec: Optional[ProblemSpec] = None) -> str:
    if history.best is None:
        raise HarnessError("Run has no evaluated solution")
    if spec is not None and history.config.get("repair", True):
        violations = is_feasible(spec, history.best)
        if violations:
            raise HarnessError("Best solution is infeasible: %s" % violations[0])
    doc = {
        "algorithm": history.algorithm,
        "seed": history.seed,
        "spec_digest": history.spec_digest,
        "evaluator": history.evaluator,
        "fitness": history.best_fitness,
        "values": history.best.to_list(),
    }
    if spec is not None:
        doc["labels"] = spec.labels
    fname = fpath(out, "best_solution.json")
    write_json(fname, doc)
    return fname


def export_run_config(history: RunHistory, out: str) -> str:
    cfg = {k: v for k, v in history.config.items() if k not in RUNTIME_SETTINGS}
    fname = fpath(out, "run_config.json")
    write_json(fname, {"spec_digest": history.spec_digest, "evaluator": history.evaluator, "config": cfg})
    return fname


def dependency_edges(history: RunHistory):
    """(i, j, cumulative chi2) of every pair ever judged dependent, i < j"""
    stats = history.stats
    if stats is None or not history.snapshots:
        return []
    idx = np.argwhere(np.triu(stats.ever_significant, k=1))
    return [(int(i), int(j), float(stats.cumulative_chi2[i, j])) for i, j in idx]


def export_dependency_data(history: RunHistory, out: str, labels: Optional[Sequence[str]] = None):
    """deps.json with every pair, deps.dot with the ever-significant ones"""
    edges = dependency_edges(history)
    stats = history.stats
    pairs = []
    if stats is not None and history.snapshots:
        n = stats.n
        for i in range(n):
            for j in range(i + 1, n):
                pairs.append(
                    {
                        "i": i,
                        "j": j,
                        "cumulative_chi2": float(stats.cumulative_chi2[i, j]),
                        "ever_significant": bool(stats.ever_significant[i, j]),
                    }
                )
    doc = {
        "estimations": len(history.snapshots),
        "pairs": pairs,
        "edges": [{"i": i, "j": j, "weight": w} for i, j, w in edges],
    }
    if labels is not None:
        doc["labels"] = list(labels)
    json_name = fpath(out, "deps.json")
    write_json(json_name, doc)

    lines = ["graph dependencies {"]
    for i, j, w in edges:
        lines.append(
            '  "%s" -- "%s" [weight=%.6g, label="%.1f"];' % (_label(labels, i), _label(labels, j), w, w)
        )
    lines.append("}")
    dot_name = fpath(out, "deps.dot")
    with open(dot_name, "w") as f:
        f.write("\n".join(lines) + "\n")
    return json_name, dot_name


def probability_summary(model, labels: Optional[Sequence[str]] = None) -> List[dict]:
    """Most probable code and its probability for every variable"""
    res = []
    for i in range(model.n):
        code, p = model.mode(i)
        res.append({"var": i, "label": _label(labels, i), "type": code, "p": p})
    return res


def export_probability_evolution(
    history: RunHistory, out: str, labels: Optional[Sequence[str]] = None
) -> List[str]:
    """One pmodel_iter<k>.json per estimated model"""
    files = []
    for snap in history.snapshots:
        fname = fpath(out, "pmodel_iter%d.json" % snap.iteration)
        write_json(
            fname,
            {
                "iteration": snap.iteration,
                "variables": probability_summary(snap.model, labels),
            },
        )
        files.append(fname)
    return files


def export_run(history: RunHistory, out: str, spec: Optional[ProblemSpec] = None) -> List[str]:
    """Writes every artifact of a run into out"""
    maybe_mkdir(out)
    labels = spec.labels if spec is not None else None
    files = [
        export_history(history, out),
        export_best_solution(history, out, spec),
        export_run_config(history, out),
    ]
    files.extend(export_dependency_data(history, out, labels))
    files.extend(export_probability_evolution(history, out, labels))
    log.info("Wrote %d files to %s", len(files), out)
    return files
