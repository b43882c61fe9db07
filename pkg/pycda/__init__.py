"""
pycda: low-traffic analysis of a continuous double auction.

The package simulates a symmetric unit-quantity double auction on a finite
price grid, computes the embedded trade-price Markov chain of its
low-traffic limit, and approximates first-passage times of the price to
the grid boundaries.
"""

__version__ = "0.1.0"

from typing import Optional

from pycda.chain.distribution import PriceDistribution
from pycda.chain.kernels import transition_matrix
from pycda.chain.solvers import invariant_distribution, mean_fpt_continuous
from pycda.core.base import ModelParams


def low_traffic_distribution(N: int, n: int) -> PriceDistribution:
    """
    Equilibrium trade-price distribution in the low-traffic limit.

    Args:
        N: Grid size
        n: Jump cut-off (1 <= n <= N - 1)

    Returns:
        PriceDistribution: Invariant distribution of the embedded chain
    """
    params = ModelParams(N=N, n=n, lam=1.0)
    return invariant_distribution(transition_matrix(params))


def low_traffic_mean_fpt(N: int, n: int, rho: float, mu: float = 1.0, start: Optional[int] = None) -> float:
    """
    Mean time until the price first trades at 1 or N, in the low-traffic limit.

    Args:
        N: Grid size (>= 3)
        n: Jump cut-off
        rho: Traffic intensity lambda/mu
        mu: Market order rate per side
        start: Opening price, the median price by default

    Returns:
        float: Mean first-passage time
    """
    return mean_fpt_continuous(ModelParams.from_rho(N, n, rho, mu), start)
