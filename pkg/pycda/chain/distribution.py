"""
Probability vectors over the price grid.
"""

from dataclasses import dataclass
from typing import Any, Dict, Sequence, Union

import numpy as np

from pycda.core.exceptions import ParameterError

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class PriceDistribution:
    """
    Distribution over prices 1..N; probs[i] is the mass of price i+1.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size < 1:
            raise ParameterError("a price distribution needs a non-empty 1-d vector")
        if np.any(probs < -NORMALIZATION_TOL):
            raise ParameterError("probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ParameterError(f"probabilities sum to {probs.sum()!r}, not 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_counts(cls, counts: Union[Sequence[float], np.ndarray]) -> "PriceDistribution":
        counts = np.asarray(counts, dtype=float)
        total = counts.sum()
        if total <= 0:
            raise ParameterError("cannot normalise an all-zero count vector")
        return cls(counts / total)

    @classmethod
    def uniform(cls, N: int) -> "PriceDistribution":
        return cls(np.full(N, 1.0 / N))

    @classmethod
    def point_mass(cls, N: int, price: int) -> "PriceDistribution":
        probs = np.zeros(N)
        probs[price - 1] = 1.0
        return cls(probs)

    @property
    def N(self) -> int:
        return int(self.probs.size)

    def __getitem__(self, price: int) -> float:
        """Mass of a price (1-based)."""
        return float(self.probs[price - 1])

    def mirrored(self) -> "PriceDistribution":
        return PriceDistribution(self.probs[::-1].copy())

    def is_reversal_symmetric(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.probs, self.probs[::-1], rtol=0.0, atol=atol))

    def total_variation(self, other: "PriceDistribution") -> float:
        """Half the L1 distance to another distribution on the same grid."""
        if other.N != self.N:
            raise ParameterError(f"grid sizes differ: {self.N} vs {other.N}")
        return 0.5 * float(np.abs(self.probs - other.probs).sum())

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.N, "probs": self.probs.tolist()}
