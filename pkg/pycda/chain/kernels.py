"""
Low-traffic price kernels and transition matrices.

In the low-traffic limit a limit order always meets an empty book and is
executed before anything else arrives, so the next trade price is a bid
drawn uniformly from [p-n, p] or an ask drawn uniformly from [p, p+n], each
clipped to the grid and each with probability 1/2. This module builds the
resulting kernels and the N x N transition matrix, either directly or from
the block tri-diagonal parametrisation (a, d_i, b_i).

Both constructions support an exact mode in which entries are
``fractions.Fraction`` values held in an object array.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import numpy as np

from pycda.core.base import Interval, ModelParams, Price
from pycda.core.exceptions import ParameterError

logger = logging.getLogger(__name__)

Number = Union[float, Fraction]


def _bid_support(p: Price, params: ModelParams) -> Interval:
    return Interval(p - params.n, p).clip(1, params.N)


def _ask_support(p: Price, params: ModelParams) -> Interval:
    return Interval(p, p + params.n).clip(1, params.N)


def _check_prices(params: ModelParams, *prices: Price) -> None:
    for price in prices:
        params.check_price(price)


def bid_prob(p: Price, b: Price, params: ModelParams, exact: bool = False) -> Number:
    """
    Probability that a bid placed on an empty book at last price p is b.

    Zero outside [p-n, p]; 1/p near the lower boundary (p <= n) and
    1/(n+1) in the bulk.

    Args:
        p: Last trade price
        b: Candidate bid price
        params: Model parameters
        exact: Return a Fraction instead of a float
    """
    _check_prices(params, p, b)
    support = _bid_support(p, params)
    if b not in support:
        return Fraction(0) if exact else 0.0
    return Fraction(1, len(support)) if exact else 1.0 / len(support)


def ask_prob(p: Price, a: Price, params: ModelParams, exact: bool = False) -> Number:
    """
    Probability that an ask placed on an empty book at last price p is a.

    Zero outside [p, p+n]; 1/(N-p+1) near the upper boundary and 1/(n+1)
    in the bulk.
    """
    _check_prices(params, p, a)
    support = _ask_support(p, params)
    if a not in support:
        return Fraction(0) if exact else 0.0
    return Fraction(1, len(support)) if exact else 1.0 / len(support)


@dataclass(frozen=True)
class TransitionMatrix:
    """
    Row-stochastic matrix of the embedded trade-price chain.

    Attributes:
        N: Grid size
        n: Jump cut-off the matrix was built for
        entries: N x N array; float64, or object dtype holding Fractions in
            exact mode. entries[p-1, q-1] is P(p -> q).
    """

    N: int
    n: int
    entries: np.ndarray

    @property
    def is_exact(self) -> bool:
        return self.entries.dtype == object

    def as_float(self) -> np.ndarray:
        """Entries as a float64 array."""
        if self.is_exact:
            return np.array([[float(x) for x in row] for row in self.entries])
        return self.entries

    def __getitem__(self, key: Tuple[Price, Price]) -> Number:
        """Entry P(p -> q) with 1-based prices."""
        p, q = key
        return self.entries[p - 1, q - 1]

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def restricted(self, first: Price, last: Price) -> np.ndarray:
        """Float sub-matrix on prices first..last (inclusive)."""
        return self.as_float()[first - 1:last, first - 1:last]


def transition_matrix(params: ModelParams, exact: bool = False) -> TransitionMatrix:
    """
    Low-traffic transition matrix P(p, p') = (ask_prob + bid_prob) / 2.

    Args:
        params: Model parameters (only N and n are used)
        exact: Build Fraction entries

    Raises:
        ParameterError: If n > N - 1
    """
    N, n = params.N, params.n
    if n > N - 1:
        raise ParameterError(f"transition matrix needs 1 <= n <= N-1, got n={n}, N={N}")
    if exact:
        entries = np.empty((N, N), dtype=object)
        entries[:, :] = Fraction(0)
        half = Fraction(1, 2)
    else:
        entries = np.zeros((N, N))
        half = 0.5
    for p in range(1, N + 1):
        for support in (_bid_support(p, params), _ask_support(p, params)):
            weight = half / len(support)
            for q in support:
                entries[p - 1, q - 1] += weight
    logger.debug("built %s transition matrix N=%d n=%d", "exact" if exact else "float", N, n)
    return TransitionMatrix(N, n, entries)


@dataclass(frozen=True)
class BlockParams:
    """
    Entries of the block tri-diagonal form.

    Attributes:
        a: Off-diagonal bulk weight 1/(2(n+1))
        d: Diagonal of the boundary block, d[i-1] = 1/(2i) + a for i = 1..n
        b: Sub-diagonal weights of the boundary block, b[i-2] = 1/(2i) for
            i = 2..n
    """

    a: Number
    d: Tuple[Number, ...]
    b: Tuple[Number, ...]

    @property
    def n(self) -> int:
        return len(self.d)

    def d_i(self, i: int) -> Number:
        return self.d[i - 1]

    def b_i(self, i: int) -> Number:
        return self.b[i - 2]

    def check_identities(self, tol: float = 0.0) -> bool:
        """
        Check the row-sum identities of the block form.

        d_1 + n a = 1, (i-1) b_i + d_i + n a = 1 for 2 <= i <= n, and
        2 n a + 2 a = 1. Exact parameters are checked with equality.
        """
        n, a = self.n, self.a
        residuals = [self.d_i(1) + n * a - 1, 2 * n * a + 2 * a - 1]
        for i in range(2, n + 1):
            residuals.append((i - 1) * self.b_i(i) + self.d_i(i) + n * a - 1)
        return all(abs(r) <= tol for r in residuals)


def block_params(n: int, exact: bool = True) -> BlockParams:
    """Compute a, d_i and b_i for a jump cut-off n."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if exact:
        a: Number = Fraction(1, 2 * (n + 1))
        d = tuple(Fraction(1, 2 * i) + a for i in range(1, n + 1))
        b = tuple(Fraction(1, 2 * i) for i in range(2, n + 1))
    else:
        a = 0.5 / (n + 1)
        d = tuple(0.5 / i + a for i in range(1, n + 1))
        b = tuple(0.5 / i for i in range(2, n + 1))
    return BlockParams(a, d, b)


def block_matrix(params: ModelParams, exact: bool = False) -> TransitionMatrix:
    """
    Assemble P from the block tri-diagonal parametrisation.

    Bulk rows carry 2a on the diagonal and a on the n neighbours each side.
    Boundary row i <= n carries b_i on columns 1..i-1, d_i on the diagonal
    and a on the next n columns; the lower-right block is the top-left block
    rotated by 180 degrees.

    Raises:
        ParameterError: If N < 2n, where the two boundary blocks overlap
    """
    N, n = params.N, params.n
    if N < 2 * n:
        raise ParameterError(f"block layout needs N >= 2n, got N={N}, n={n}")
    bp = block_params(n, exact=exact)
    a = bp.a
    if exact:
        entries = np.empty((N, N), dtype=object)
        entries[:, :] = Fraction(0)
    else:
        entries = np.zeros((N, N))

    for row in range(N):
        for col in range(max(0, row - n), min(N, row + n + 1)):
            entries[row, col] = a
        entries[row, row] = 2 * a

    for i in range(1, n + 1):
        top = i - 1
        for j in range(i - 1):
            entries[top, j] = bp.b_i(i)
        entries[top, top] = bp.d_i(i)
        for col in range(i, i + n):
            entries[top, col] = a

    corner = entries[:n, :n].copy()
    entries[N - n:, N - n:] = corner[::-1, ::-1]
    # Rows N-n+1..N also carry a on the n columns left of their diagonal.
    for i in range(1, n + 1):
        bottom = N - i
        for col in range(bottom - n, N - n):
            entries[bottom, col] = a
    return TransitionMatrix(N, n, entries)
