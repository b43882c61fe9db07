"""
Discrete two-barrier first-passage distribution.

A simple symmetric +-1 walk started at the midpoint (N+1)/2 of an odd grid
is absorbed at 1 or N. The number of steps to absorption has the closed form

    P(h) = 2/(N-1) * sum_{k=1}^{N-2} (-1)^{k+1} sin(k pi/(N-1))
           cos^{h-1}(k pi/(N-1)) sin(k pi/2),   h >= 1.

sin(k pi/2) vanishes for even k, so only odd k are summed, which also avoids
cancellation between terms that are identically zero.
"""

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

import numpy as np

from pycda.core.exceptions import ParameterError
from pycda.core.rng import RngLike, make_rng

logger = logging.getLogger(__name__)

TRUNCATION_EPS = 1e-12
_CHUNK = 4096


def _check_odd_grid(N: int) -> None:
    if int(N) != N or N < 3 or N % 2 == 0:
        raise ParameterError(f"the closed form needs an odd grid size N >= 3, got {N}")


def discrete_fpt_pmf(N: int, h: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Probability that the midpoint walk is absorbed at exactly step h.

    Args:
        N: Odd grid size
        h: Step count (int or integer array), h >= 1

    Returns:
        float for scalar h, array otherwise
    """
    _check_odd_grid(N)
    steps = np.asarray(h)
    if np.any(steps < 1):
        raise ParameterError("h must be >= 1")
    M = N - 1
    k = np.arange(1, N - 1, 2)
    theta = k * np.pi / M
    # (-1)^(k+1) = 1 for odd k; sin(k pi/2) = (-1)^((k-1)/2)
    coef = np.sin(theta) * np.where((k // 2) % 2 == 0, 1.0, -1.0)
    exponents = np.atleast_1d(steps).astype(float) - 1.0
    # 0.0 ** 0 == 1 covers the h=1 term at cos(pi/2)
    powers = np.power(np.cos(theta)[None, :], exponents[:, None])
    values = np.clip((2.0 / M) * (powers @ coef), 0.0, 1.0)
    if steps.ndim == 0:
        return float(values[0])
    return values.reshape(steps.shape)


def expected_discrete_fpt(N: int, start: Optional[int] = None) -> int:
    """
    Mean absorption step count of the +-1 walk: (start-1)(N-start).
    """
    begin = (N + 1) // 2 if start is None else start
    if not 1 <= begin <= N:
        raise ParameterError(f"start {begin} outside 1..{N}")
    return (begin - 1) * (N - begin)


def enumerate_fpt_pmf(N: int, h_max: int, start: Optional[int] = None) -> List[Fraction]:
    """
    Exact absorption probabilities by propagating path weights.

    Args:
        N: Grid size (any N >= 3)
        h_max: Largest step count
        start: Starting price, the midpoint by default

    Returns:
        List whose entry h-1 is P(absorbed at step h), for h = 1..h_max
    """
    if N < 3:
        raise ParameterError(f"N must be >= 3, got {N}")
    begin = (N + 1) // 2 if start is None else start
    if not 2 <= begin <= N - 1:
        raise ParameterError(f"start must lie in 2..{N - 1}, got {begin}")
    half = Fraction(1, 2)
    weights = {begin: Fraction(1)}
    pmf: List[Fraction] = []
    for _ in range(h_max):
        absorbed = Fraction(0)
        nxt: dict = {}
        for price, weight in weights.items():
            for target in (price - 1, price + 1):
                if target in (1, N):
                    absorbed += weight * half
                else:
                    nxt[target] = nxt.get(target, Fraction(0)) + weight * half
        pmf.append(absorbed)
        weights = nxt
    return pmf


@dataclass(frozen=True)
class DiscreteFptDist:
    """
    Truncated closed-form distribution of the discrete passage time.

    Attributes:
        N: Odd grid size
        h: Support values 1..H
        pmf: Probabilities of h
        truncation_eps: Target tail mass left out
    """

    N: int
    h: np.ndarray
    pmf: np.ndarray
    truncation_eps: float

    @property
    def mass(self) -> float:
        return float(self.pmf.sum())

    def mean(self) -> float:
        return float((self.h * self.pmf).sum() / self.pmf.sum())

    def __call__(self, h: int) -> float:
        if 1 <= h <= self.h[-1]:
            return float(self.pmf[h - 1])
        return 0.0

    def sample(self, rng: RngLike = None, size: Optional[int] = None) -> Union[int, np.ndarray]:
        """
        Draw step counts; the truncated tail is spread by renormalisation.
        """
        gen = make_rng(rng)
        return gen.choice(self.h, size=size, p=self.pmf / self.pmf.sum())


@functools.lru_cache(maxsize=64)
def discrete_fpt_dist(N: int, eps: float = TRUNCATION_EPS) -> DiscreteFptDist:
    """
    Tabulate discrete_fpt_pmf until the cumulative mass reaches 1 - eps
    or h exceeds 200 (N-1)^2.
    """
    _check_odd_grid(N)
    cap = 200 * (N - 1) ** 2
    chunks = []
    total = 0.0
    first = 1
    while first <= cap:
        last = min(first + _CHUNK - 1, cap)
        values = discrete_fpt_pmf(N, np.arange(first, last + 1))
        cumulative = total + np.cumsum(values)
        reached = np.nonzero(cumulative >= 1.0 - eps)[0]
        if reached.size:
            chunks.append(values[:reached[0] + 1])
            break
        chunks.append(values)
        total = float(cumulative[-1])
        first = last + 1
    else:
        logger.warning("pmf truncated at h=%d with mass %.15f", cap, total)
    pmf = np.concatenate(chunks)
    logger.debug("tabulated discrete passage pmf for N=%d up to h=%d", N, pmf.size)
    return DiscreteFptDist(N=N, h=np.arange(1, pmf.size + 1), pmf=pmf, truncation_eps=eps)
