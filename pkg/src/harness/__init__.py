from .core import HarnessError, UsageError
from .pool import EvaluationPool, available_jobs
from .compare import CompareReport, compare, run_seed
from .export import (
    export_run,
    export_history,
    export_best_solution,
    export_run_config,
    export_dependency_data,
    export_probability_evolution,
    dependency_edges,
    probability_summary,
)
from .cli import build_parser, parse_args, dispatch
