"""
Empirical distribution helpers: ECDFs, histograms with a normal fit, and
distances between price distributions.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats as sps

from pycda.core.exceptions import EmptySampleError, ParameterError

ArrayLike = Union[Sequence[float], np.ndarray]


def _as_samples(samples: ArrayLike) -> np.ndarray:
    values = np.asarray(samples, dtype=float).ravel()
    if values.size == 0:
        raise EmptySampleError("at least one sample is required")
    return values


@dataclass(frozen=True)
class Ecdf:
    """
    Empirical CDF, F(x) = fraction of samples <= x.

    Attributes:
        sorted_values: Samples in ascending order
    """

    sorted_values: np.ndarray

    @property
    def size(self) -> int:
        return int(self.sorted_values.size)

    def __call__(self, x: Union[float, ArrayLike]) -> Union[float, np.ndarray]:
        points = np.asarray(x, dtype=float)
        values = np.searchsorted(self.sorted_values, points, side="right") / self.size
        if points.ndim == 0:
            return float(values)
        return values

    def steps(self) -> np.ndarray:
        """(x, F(x)) pairs at each distinct sample value."""
        xs = np.unique(self.sorted_values)
        return np.column_stack([xs, self(xs)])


def ecdf(samples: ArrayLike) -> Ecdf:
    """
    Build the empirical CDF of a sample.

    Raises:
        EmptySampleError: If samples is empty
    """
    return Ecdf(np.sort(_as_samples(samples)))


@dataclass(frozen=True)
class Histogram:
    """
    Equal-width histogram with a moment-matched normal curve.

    Bins are [e0, e1], (e1, e2], ..., (e_{k-1}, e_k].
    """

    edges: np.ndarray
    counts: np.ndarray
    mean: float
    std: float
    skewness: float

    @property
    def size(self) -> int:
        return int(self.counts.sum())

    def density(self) -> np.ndarray:
        widths = np.diff(self.edges)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = self.counts / (self.size * widths)
        return np.where(widths > 0, dens, np.nan)

    def normal_density(self) -> np.ndarray:
        """Fitted normal pdf at the bin centres."""
        centres = 0.5 * (self.edges[:-1] + self.edges[1:])
        if not self.std > 0:
            return np.full(centres.shape, np.nan)
        return sps.norm.pdf(centres, loc=self.mean, scale=self.std)


def _freedman_diaconis_bins(values: np.ndarray) -> int:
    edges = np.histogram_bin_edges(values, bins="fd")
    return max(1, edges.size - 1)


def histogram(samples: ArrayLike, bins: Optional[int] = None) -> Histogram:
    """
    Equal-width histogram over [min, max] plus a normal fit by moments.

    Args:
        samples: Observations
        bins: Number of bins; Freedman-Diaconis when None

    Raises:
        ParameterError: If bins < 1
    """
    values = _as_samples(samples)
    if bins is not None and bins < 1:
        raise ParameterError(f"bins must be >= 1, got {bins}")
    lo, hi = float(values.min()), float(values.max())
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    if lo == hi:
        return Histogram(np.array([lo, hi]), np.array([values.size]), mean, std, 0.0)

    count = bins if bins is not None else _freedman_diaconis_bins(values)
    edges = np.linspace(lo, hi, count + 1)
    index = np.clip(np.searchsorted(edges, values, side="left") - 1, 0, count - 1)
    counts = np.bincount(index, minlength=count)
    return Histogram(edges, counts, mean, std, skewness(values))


def skewness(samples: ArrayLike) -> float:
    """Sample skewness (biased moment estimator)."""
    values = _as_samples(samples)
    if values.size < 3 or np.all(values == values[0]):
        return 0.0
    return float(sps.skew(values))


def total_variation(p: ArrayLike, q: ArrayLike) -> float:
    """Half the L1 distance between two probability vectors."""
    a = np.asarray(p, dtype=float)
    b = np.asarray(q, dtype=float)
    if a.shape != b.shape:
        raise ParameterError(f"shapes differ: {a.shape} vs {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())


def mean_and_stderr(samples: ArrayLike) -> Tuple[float, float]:
    """Sample mean and its standard error."""
    values = _as_samples(samples)
    if values.size == 1:
        return float(values[0]), math.nan
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))
