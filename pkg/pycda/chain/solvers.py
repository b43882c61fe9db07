"""
Stationary and absorbing analysis of the embedded price chain.
"""

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from pycda.chain.distribution import PriceDistribution
from pycda.chain.kernels import TransitionMatrix, transition_matrix
from pycda.core.base import ModelParams, Price
from pycda.core.exceptions import ParameterError, SolverError

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-12


def stationary_residual(P: TransitionMatrix, pi: PriceDistribution) -> float:
    """Sup-norm of pi P - pi."""
    T = P.as_float()
    return float(np.max(np.abs(pi.probs @ T - pi.probs)))


def power_iteration(
    P: TransitionMatrix,
    tol: float = RESIDUAL_TOL,
    max_iter: int = 1_000_000,
    initial: Optional[PriceDistribution] = None,
) -> PriceDistribution:
    """
    Stationary distribution by repeated multiplication pi <- pi P.

    Raises:
        SolverError: If the sup-norm change does not drop below tol within
            max_iter iterations
    """
    T = P.as_float()
    pi = np.full(P.N, 1.0 / P.N) if initial is None else initial.probs.copy()
    for iteration in range(1, max_iter + 1):
        nxt = pi @ T
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) <= tol:
            logger.debug("power iteration converged after %d iterations", iteration)
            return PriceDistribution(nxt)
        pi = nxt
    raise SolverError(f"power iteration did not converge within {max_iter} iterations")


def invariant_distribution(
    P: TransitionMatrix,
    tol: float = RESIDUAL_TOL,
    max_iter: int = 1_000_000,
) -> PriceDistribution:
    """
    Unique distribution with pi P = pi.

    Solves the transposed system (P^T - I) pi = 0 with the last equation
    replaced by sum(pi) = 1. Falls back to power iteration when the solve
    is singular or its residual exceeds tol.

    Args:
        P: Irreducible row-stochastic matrix
        tol: Residual tolerance on ||pi P - pi||_inf
        max_iter: Iteration cap of the fallback

    Raises:
        SolverError: If the fallback does not converge either
    """
    T = P.as_float()
    N = P.N
    A = T.T - np.eye(N)
    A[-1, :] = 1.0
    rhs = np.zeros(N)
    rhs[-1] = 1.0
    try:
        with np.errstate(all="raise"):
            probs = scipy.linalg.solve(A, rhs)
        probs = np.clip(probs, 0.0, None)
        pi = PriceDistribution(probs / probs.sum())
        if stationary_residual(P, pi) <= tol:
            return pi
        logger.warning("direct stationary solve residual above %g, using power iteration", tol)
    except (scipy.linalg.LinAlgError, FloatingPointError, ParameterError) as exc:
        logger.warning("direct stationary solve failed (%s), using power iteration", exc)
    return power_iteration(P, tol=tol, max_iter=max_iter)


def propagate_distribution(P: TransitionMatrix, initial: PriceDistribution, steps: int) -> PriceDistribution:
    """
    Law of the price after a number of trades, initial P^steps.
    """
    if steps < 0:
        raise ParameterError(f"steps must be >= 0, got {steps}")
    if initial.N != P.N:
        raise ParameterError(f"initial law has N={initial.N}, matrix has N={P.N}")
    T = P.as_float()
    probs = initial.probs.copy()
    for _ in range(steps):
        probs = probs @ T
    return PriceDistribution(probs / probs.sum())


def mean_fpt_vector(P: TransitionMatrix) -> np.ndarray:
    """
    Expected number of trades to reach price 1 or N, for every start.

    Solves (I - P_{2..N-1}) x = 1 over the transient prices.

    Returns:
        Array of length N with zeros at the two absorbing prices

    Raises:
        SolverError: If the restricted system is singular
    """
    N = P.N
    if N < 3:
        raise ParameterError(f"first passage needs N >= 3, got N={N}")
    Q = P.restricted(2, N - 1)
    A = np.eye(N - 2) - Q
    try:
        with np.errstate(all="raise"):
            x = scipy.linalg.solve(A, np.ones(N - 2))
    except (scipy.linalg.LinAlgError, FloatingPointError) as exc:
        raise SolverError(f"absorbing system is singular: {exc}") from exc
    full = np.zeros(N)
    full[1:N - 1] = x
    return full


def mean_fpt_discrete(P: TransitionMatrix, start: Price) -> float:
    """
    Expected number of chain steps from start until price 1 or N.

    Args:
        P: Transition matrix
        start: Starting price in 2..N-1
    """
    if not 2 <= start <= P.N - 1:
        raise ParameterError(f"start must lie in 2..{P.N - 1}, got {start}")
    return float(mean_fpt_vector(P)[start - 1])


def mean_fpt_continuous(params: ModelParams, start: Optional[Price] = None) -> float:
    """
    Low-traffic mean first-passage time in continuous time.

    Trades happen at rate 2*lambda in the low-traffic limit, so the mean
    number of chain steps is divided by 2*lambda (1/(2 rho) when mu = 1).

    Args:
        params: Model parameters
        start: Starting price, floor((N+1)/2) by default
    """
    P = transition_matrix(params)
    begin = params.opening_price if start is None else start
    return mean_fpt_discrete(P, begin) / (2.0 * params.lam)
