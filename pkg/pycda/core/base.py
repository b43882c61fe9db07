"""
Base types for pycda.

This module defines the value types shared by every part of the library:
model parameters, order sides and event kinds, arrival events, trade records
and integer price intervals on the grid 1..N.
"""

from dataclasses import dataclass
from enum import Enum
from numbers import Integral
from typing import Any, Dict, Iterator, NamedTuple

from pycda.core.exceptions import ParameterError

# Prices are plain ints on the tick grid 1..N.
Price = int


class Side(Enum):
    """Side of the book an order rests on."""

    BID = "bid"
    ASK = "ask"


class EventKind(Enum):
    """The four Poisson order streams of the auction."""

    LIMIT_BID = "limit_bid"
    LIMIT_ASK = "limit_ask"
    MARKET_BUY = "market_buy"
    MARKET_SELL = "market_sell"

    @property
    def is_limit(self) -> bool:
        return self in (EventKind.LIMIT_BID, EventKind.LIMIT_ASK)

    @property
    def side(self) -> Side:
        """
        Book side touched by the event.

        Limit orders rest on their own side; market orders consume the
        opposite side (a market buy lifts the best ask).
        """
        if self in (EventKind.LIMIT_BID, EventKind.MARKET_SELL):
            return Side.BID
        return Side.ASK

    def mirrored(self) -> "EventKind":
        """Return the kind obtained by swapping buy and sell."""
        return _MIRRORED_KINDS[self]


_MIRRORED_KINDS = {
    EventKind.LIMIT_BID: EventKind.LIMIT_ASK,
    EventKind.LIMIT_ASK: EventKind.LIMIT_BID,
    EventKind.MARKET_BUY: EventKind.MARKET_SELL,
    EventKind.MARKET_SELL: EventKind.MARKET_BUY,
}

# Canonical ordering used for categorical sampling.
EVENT_KINDS = (
    EventKind.LIMIT_BID,
    EventKind.LIMIT_ASK,
    EventKind.MARKET_BUY,
    EventKind.MARKET_SELL,
)


class Event(NamedTuple):
    """An order arrival."""

    kind: EventKind
    time: float


class Trade(NamedTuple):
    """A unit-quantity execution."""

    price: Price
    time: float


@dataclass(frozen=True)
class ModelParams:
    """
    Parameters of a symmetric unit-quantity double auction.

    Attributes:
        N: Number of price levels; prices run from 1 to N
        n: Cut-off of the uniform placement intervals
        lam: Limit-order arrival rate per side
        mu: Market-order arrival rate per side
    """

    N: int
    n: int
    lam: float
    mu: float = 1.0

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < 2:
            raise ParameterError(f"N must be an integer >= 2, got {self.N}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be an integer >= 1, got {self.n}")
        if not self.lam > 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        if not self.mu > 0:
            raise ParameterError(f"mu must be positive, got {self.mu}")

    @classmethod
    def from_rho(cls, N: int, n: int, rho: float, mu: float = 1.0) -> "ModelParams":
        """
        Build parameters from a traffic intensity.

        Args:
            N: Grid size
            n: Jump cut-off
            rho: Traffic intensity lambda/mu
            mu: Market-order rate per side

        Returns:
            ModelParams with lam = rho * mu
        """
        if not rho > 0:
            raise ParameterError(f"rho must be positive, got {rho}")
        return cls(N=N, n=n, lam=rho * mu, mu=mu)

    @property
    def rho(self) -> float:
        """Traffic intensity lambda/mu."""
        return self.lam / self.mu

    @property
    def total_rate(self) -> float:
        """Rate of the superposed order stream, 2*lambda + 2*mu."""
        return 2.0 * self.lam + 2.0 * self.mu

    @property
    def opening_price(self) -> Price:
        """Median price floor((N+1)/2), the default opening price."""
        return (self.N + 1) // 2

    def check_price(self, price: Price) -> Price:
        """
        Validate that a price lies on the grid.

        Raises:
            ParameterError: If price is outside 1..N
        """
        if int(price) != price or not 1 <= price <= self.N:
            raise ParameterError(f"price {price} outside grid 1..{self.N}")
        return int(price)

    def mirror(self, price: Price) -> Price:
        """Reflect a price through the centre of the grid."""
        return self.N + 1 - price

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.N, "n": self.n, "lambda": self.lam, "mu": self.mu, "rho": self.rho}


@dataclass(frozen=True)
class Interval:
    """
    Closed integer interval [lo, hi]; empty when lo > hi.
    """

    lo: int
    hi: int

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)

    def __contains__(self, value: object) -> bool:
        return isinstance(value, Integral) and self.lo <= value <= self.hi

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def clip(self, lo: int, hi: int) -> "Interval":
        """Intersect with [lo, hi]."""
        return Interval(max(self.lo, lo), min(self.hi, hi))

    def mirrored(self, N: int) -> "Interval":
        """Image of the interval under p -> N+1-p."""
        return Interval(N + 1 - self.hi, N + 1 - self.lo)
