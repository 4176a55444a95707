import helpers
from .core import FitnessError, DivergedSimulation, Evaluator

# submodules with evaluators, see helpers.load_evaluators
__all__ = ["suspension", "synthetic"]

_evaluators = None


def get_evaluator(spec, params=None) -> Evaluator:
    """Evaluator named by the problem file's fitness id"""
    global _evaluators
    if _evaluators is None:
        _evaluators = helpers.load_evaluators("fitness")
    try:
        cls = _evaluators[spec.fitness_id]
    except KeyError:
        raise FitnessError(
            "Unknown fitness id %r, available: %s" % (spec.fitness_id, ", ".join(sorted(_evaluators)))
        )
    return cls(spec, params)
