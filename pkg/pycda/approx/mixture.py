"""
Negative-binomial / Gamma lift of the discrete passage time.

The continuous-time approximation is built in three steps:

1. draw the number of price changes h from the closed-form two-barrier
   distribution;
2. each order arrival changes the price with probability rho/(2(rho+1)),
   so the number of arrivals up to the h-th change is a sum of h geometric
   variables on {1, 2, ...} (total trials until the h-th success);
3. arrivals form a Poisson stream of rate 2 mu (1 + rho), so given the
   arrival count the elapsed time is Gamma(count, 1/(2 mu (1 + rho))).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pycda.approx.two_barrier import discrete_fpt_dist, expected_discrete_fpt
from pycda.core.base import ModelParams
from pycda.core.exceptions import ParameterError
from pycda.core.rng import RngLike, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MixtureApprox:
    """
    Parameters of the Gamma-mixture approximation.

    Attributes:
        params: Model parameters (rho and mu are used)
    """

    params: ModelParams

    def __post_init__(self) -> None:
        if not 0.0 < self.move_prob < 0.5:
            raise ParameterError(f"move probability {self.move_prob} outside (0, 1/2)")

    @property
    def move_prob(self) -> float:
        """Chance that an arrival changes the price, rho/(2(rho+1))."""
        rho = self.params.rho
        return rho / (2.0 * (rho + 1.0))

    @property
    def event_time_scale(self) -> float:
        """Mean inter-arrival time 1/(2 mu (1 + rho))."""
        return 1.0 / (2.0 * self.params.mu * (1.0 + self.params.rho))


@dataclass(frozen=True)
class LogMeanEstimate:
    """Monte Carlo estimate of E[log T]."""

    mean: float
    stderr: float
    samples: int


def mixture_samples(approx: MixtureApprox, N: int, size: int, rng: RngLike = None) -> np.ndarray:
    """
    Draw passage times from the mixture.

    Args:
        approx: Mixture parameters
        N: Odd grid size
        size: Number of draws
        rng: Seed, RngSpec or Generator

    Returns:
        Array of continuous times
    """
    if size < 1:
        raise ParameterError(f"size must be >= 1, got {size}")
    gen = make_rng(rng)
    dist = discrete_fpt_dist(N)
    changes = np.asarray(dist.sample(gen, size=size))
    # numpy counts failures before the h-th success
    arrivals = changes + gen.negative_binomial(changes, approx.move_prob)
    return gen.gamma(shape=arrivals, scale=approx.event_time_scale)


def mixture_sample(approx: MixtureApprox, N: int, rng: RngLike = None) -> float:
    """Draw a single passage time from the mixture."""
    return float(mixture_samples(approx, N, 1, rng)[0])


def mixture_mean(approx: MixtureApprox, N: int) -> float:
    """
    Analytic mean of the mixture, E[h] * event_time_scale / move_prob.

    For n = 1 this equals the low-traffic mean passage time of
    the chain, E[h] / lambda.
    """
    if N < 3 or N % 2 == 0:
        raise ParameterError(f"the mixture needs an odd grid size N >= 3, got {N}")
    return expected_discrete_fpt(N) * approx.event_time_scale / approx.move_prob


def mixture_log_mean(
    approx: MixtureApprox,
    N: int,
    samples: int,
    rng: RngLike = None,
) -> LogMeanEstimate:
    """
    Monte Carlo mean of log T under the mixture, with its standard error.
    """
    if samples < 1:
        raise ParameterError(f"samples must be >= 1, got {samples}")
    logs = np.log(mixture_samples(approx, N, samples, rng))
    stderr = float(logs.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.nan
    return LogMeanEstimate(mean=float(logs.mean()), stderr=stderr, samples=samples)
