"""
Direct simulation of the embedded trade-price chain from its transition
matrix. Used to check the matrix against the full order-book engine.
"""

import bisect
import logging
from typing import List

import numpy as np

from pycda.chain.kernels import TransitionMatrix
from pycda.core.base import Price
from pycda.core.exceptions import ParameterError
from pycda.core.rng import RngLike, make_rng

logger = logging.getLogger(__name__)

_CHUNK = 8192


def _cumulative_rows(P: TransitionMatrix) -> List[List[float]]:
    cum = np.cumsum(P.as_float(), axis=1)
    cum[:, -1] = 1.0
    return cum.tolist()


def _check_start(P: TransitionMatrix, start: Price) -> None:
    if not 1 <= start <= P.N:
        raise ParameterError(f"start must lie in [1, {P.N}], got {start}")


def simulate_embedded_chain(P: TransitionMatrix, start: Price, steps: int, rng: RngLike = None) -> np.ndarray:
    """
    Sample a path of the chain.

    Args:
        P: Transition matrix
        start: Initial price
        steps: Number of transitions
        rng: Seed, RngSpec or Generator

    Returns:
        Integer array of length steps + 1, starting with start
    """
    _check_start(P, start)
    if steps < 0:
        raise ParameterError(f"steps must be >= 0, got {steps}")
    gen = make_rng(rng)
    rows = _cumulative_rows(P)
    path = np.empty(steps + 1, dtype=np.int64)
    path[0] = start
    state = start
    done = 0
    while done < steps:
        block = gen.random(min(_CHUNK, steps - done)).tolist()
        for u in block:
            state = bisect.bisect_right(rows[state - 1], u) + 1
            done += 1
            path[done] = state
    return path


def embedded_absorption_steps(
    P: TransitionMatrix,
    start: Price,
    rng: RngLike = None,
    max_steps: int = 10**9,
) -> int:
    """
    Number of transitions until the chain first reaches 1 or N.

    Returns:
        Step count, or -1 if max_steps passed without absorption
    """
    _check_start(P, start)
    if start in (1, P.N):
        return 0
    gen = make_rng(rng)
    rows = _cumulative_rows(P)
    state = start
    taken = 0
    while taken < max_steps:
        for u in gen.random(min(_CHUNK, max_steps - taken)).tolist():
            state = bisect.bisect_right(rows[state - 1], u) + 1
            taken += 1
            if state == 1 or state == P.N:
                return taken
    logger.warning("embedded chain not absorbed within %d steps", max_steps)
    return -1


def empirical_transitions(path: np.ndarray, N: int) -> np.ndarray:
    """
    Row-normalised one-step transition frequencies observed along a path.

    Rows of prices never left are all zero.
    """
    counts = np.zeros((N, N), dtype=float)
    np.add.at(counts, (path[:-1] - 1, path[1:] - 1), 1.0)
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(totals > 0, counts / totals, 0.0)
