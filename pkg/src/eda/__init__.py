from .core import ALGORITHMS, EdaError, ConfigError, RunAborted, AlgoConfig, Population
from .selection import select_truncation, truncation_indices, truncation_size
from .chisquare import THRESHOLDS_99, ChiSquareResult, chi_square, threshold
from .model import DependencyStats, ProbabilityModel, estimate_model, independent_model
from .sampling import (
    gibbs_sample,
    gibbs_sample_batch,
    bmda_ancestral_sample,
    ancestral_sample_batch,
    dependency_forest,
)
from .ga import ga_step, ga_offspring
from .history import HISTORY_COLUMNS, IterationRecord, ModelSnapshot, RunHistory
from .runner import (
    OPTIMIZERS,
    Optimizer,
    BmdaGs,
    BmdaOriginal,
    GeneticAlgorithm,
    initialize_population,
    run,
)
