"""
Replicate fan-out.

A replicate is a pure function of its payload (parameters plus an RngSpec),
so results do not depend on how replicates are scheduled across workers.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from pycda.core.exceptions import ParameterError

logger = logging.getLogger(__name__)

P = TypeVar("P")
R = TypeVar("R")


def run_replicates(task: Callable[[P], R], payloads: Sequence[P], workers: int = 1) -> List[R]:
    """
    Evaluate task on every payload, in payload order.

    Args:
        task: Picklable top-level callable
        payloads: One payload per replicate
        workers: Process count; 1 runs in the calling process

    Returns:
        Results in the order of payloads
    """
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(payloads) < 2:
        return [task(payload) for payload in payloads]
    chunksize = max(1, len(payloads) // (workers * 8))
    logger.info("running %d replicates on %d workers", len(payloads), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, payloads, chunksize=chunksize))
