"""
Seeded random streams.

Every random draw in pycda comes from a numpy Generator derived from an
RngSpec. A spec is a pure value, so a replicate can be re-run on any worker
and produce the same numbers.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Dict, List, Optional, Union

import numpy as np


class Stream(IntEnum):
    """Roles that keep independent consumers of one master seed apart."""

    REPLICATE = 0
    MIXTURE = 1
    PERMUTATION = 2
    EMBEDDED = 3


@dataclass(frozen=True)
class RngSpec:
    """
    Address of one independent random stream.

    Attributes:
        master_seed: Experiment-wide seed (64-bit integer)
        stream_index: Replicate id within the role
        role: Which consumer the stream belongs to
    """

    master_seed: int
    stream_index: int = 0
    role: Stream = Stream.REPLICATE

    def generator(self) -> np.random.Generator:
        """Build the generator for this stream."""
        seq = np.random.SeedSequence(
            entropy=self.master_seed,
            spawn_key=(int(self.role), self.stream_index),
        )
        return np.random.Generator(np.random.PCG64(seq))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "master_seed": self.master_seed,
            "stream_index": self.stream_index,
            "role": self.role.name.lower(),
        }


RngLike = Union[None, int, RngSpec, np.random.Generator]


def make_rng(rng: RngLike = None) -> np.random.Generator:
    """
    Coerce a seed-like value into a numpy Generator.

    Args:
        rng: None (fresh entropy), an int seed, an RngSpec or a Generator

    Returns:
        np.random.Generator
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSpec):
        return rng.generator()
    if rng is None:
        return np.random.default_rng()
    return RngSpec(int(rng)).generator()


def replicate_specs(master_seed: int, count: int, role: Stream = Stream.REPLICATE,
                    start: Optional[int] = 0) -> List[RngSpec]:
    """Return specs for replicates start .. start+count-1."""
    first = start or 0
    return [RngSpec(master_seed, first + i, role) for i in range(count)]
