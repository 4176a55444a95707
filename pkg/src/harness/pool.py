"""Worker pool for fitness evaluations"""
import logging
import multiprocessing
import os
from typing import Callable, List, Optional, Sequence

from .core import HarnessError

log = logging.getLogger(__name__)


def available_jobs() -> int:
    return os.cpu_count() or 1


class EvaluationPool:
    """
    Maps an evaluator over candidates in worker processes.
    Results come back in input order, so the optimizer state
    never depends on which worker finished first.
    With a single job everything runs in this process.
    """

    def __init__(self, jobs: Optional[int] = None):
        self.jobs = jobs if jobs is not None else available_jobs()
        if self.jobs < 1:
            raise HarnessError("Number of jobs must be positive")
        self._pool = None

    def __enter__(self):
        if self.jobs > 1:
            log.debug("Starting %d evaluation workers", self.jobs)
            self._pool = multiprocessing.Pool(self.jobs)
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def map(self, fn: Callable, items: Sequence) -> List:
        if self._pool is None:
            return [fn(item) for item in items]
        chunksize = max(1, len(items) // (4 * self.jobs))
        return self._pool.map(fn, items, chunksize=chunksize)
