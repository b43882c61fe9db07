"""
Order book and auction state transitions.

The book holds unit-quantity limit orders on the integer grid 1..N, FIFO
within each price level. ``apply_event`` is the single place where the
auction rules live: where a limit order may be placed, how a market order
executes, and what happens on an empty side.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Deque, List, Optional, Tuple

from pycda.core.base import Event, EventKind, Interval, ModelParams, Price, Side, Trade
from pycda.core.exceptions import ParameterError

# Uniform integer source: draw(lo, hi) returns a price in [lo, hi].
PriceDraw = Callable[[int, int], int]


class OrderBook:
    """
    Resting limit orders of both sides.

    Each price level is a FIFO queue of order ids. Best quotes are cached and
    refreshed by scanning when the best level empties; books stay shallow in
    the regimes of interest so the scan is cheap.
    """

    def __init__(self, N: int):
        """
        Initialize an empty book.

        Args:
            N: Number of price levels
        """
        self.N = N
        self._levels = {
            Side.BID: [deque() for _ in range(N + 2)],
            Side.ASK: [deque() for _ in range(N + 2)],
        }
        self._depth = {Side.BID: 0, Side.ASK: 0}
        self._best: dict = {Side.BID: None, Side.ASK: None}
        self._next_id = 0

    @property
    def best_bid(self) -> Optional[Price]:
        return self._best[Side.BID]

    @property
    def best_ask(self) -> Optional[Price]:
        return self._best[Side.ASK]

    def best(self, side: Side) -> Optional[Price]:
        return self._best[side]

    def depth(self, side: Side) -> int:
        """Number of orders resting on a side."""
        return self._depth[side]

    def is_empty(self, side: Optional[Side] = None) -> bool:
        if side is None:
            return self._depth[Side.BID] == 0 and self._depth[Side.ASK] == 0
        return self._depth[side] == 0

    def add(self, side: Side, price: Price) -> int:
        """
        Rest a unit order at a price.

        Args:
            side: Book side
            price: Limit price in 1..N

        Returns:
            The id assigned to the order
        """
        if not 1 <= price <= self.N:
            raise ParameterError(f"price {price} outside grid 1..{self.N}")
        order_id = self._next_id
        self._next_id += 1
        self._levels[side][price].append(order_id)
        self._depth[side] += 1
        best = self._best[side]
        if best is None or (price > best if side is Side.BID else price < best):
            self._best[side] = price
        return order_id

    def pop_best(self, side: Side) -> Optional[Tuple[Price, int]]:
        """
        Remove the oldest order at the best price of a side.

        Returns:
            (price, order_id), or None if the side is empty
        """
        price = self._best[side]
        if price is None:
            return None
        level = self._levels[side][price]
        order_id = level.popleft()
        self._depth[side] -= 1
        if not level:
            self._best[side] = self._scan_best(side, price)
        return price, order_id

    def _scan_best(self, side: Side, start: Price) -> Optional[Price]:
        if self._depth[side] == 0:
            return None
        levels = self._levels[side]
        if side is Side.BID:
            for price in range(start - 1, 0, -1):
                if levels[price]:
                    return price
        else:
            for price in range(start + 1, self.N + 1):
                if levels[price]:
                    return price
        return None

    def prices(self, side: Side) -> List[Price]:
        """Resting prices of a side in priority order, one entry per order."""
        levels = self._levels[side]
        order = range(self.N, 0, -1) if side is Side.BID else range(1, self.N + 1)
        return [price for price in order for _ in levels[price]]

    def __repr__(self) -> str:
        return f"OrderBook(N={self.N}, bids={self.prices(Side.BID)}, asks={self.prices(Side.ASK)})"


@dataclass
class AuctionState:
    """
    Full state of one auction.

    Attributes:
        book: Resting orders
        last_trade_price: Most recent execution price (the opening price
            until the first trade)
        clock: Time of the last processed event
    """

    book: OrderBook
    last_trade_price: Price
    clock: float = 0.0
    trade_count: int = field(default=0)

    @classmethod
    def opening(cls, params: ModelParams, price: Optional[Price] = None) -> "AuctionState":
        """
        Empty-book state at the opening auction price.

        Args:
            params: Model parameters
            price: Opening price, floor((N+1)/2) when omitted
        """
        opening = params.opening_price if price is None else params.check_price(price)
        return cls(book=OrderBook(params.N), last_trade_price=opening)


def bid_interval(state: AuctionState, params: ModelParams) -> Interval:
    """
    Interval from which an incoming limit bid is drawn uniformly.

    With asks resting, bids go strictly below the best ask: [p_a-n, p_a-1].
    Without asks, the interval is anchored at the last trade price:
    [p-n, p]. Both are clipped to the grid; an empty result means the bid
    is impossible.
    """
    best_ask = state.book.best_ask
    if best_ask is not None:
        raw = Interval(best_ask - params.n, best_ask - 1)
    else:
        p = state.last_trade_price
        raw = Interval(p - params.n, p)
    return raw.clip(1, params.N)


def ask_interval(state: AuctionState, params: ModelParams) -> Interval:
    """
    Interval from which an incoming limit ask is drawn uniformly.

    Mirror of bid_interval: [p_b+1, p_b+n] against resting bids, otherwise
    [p, p+n] around the last trade price, clipped to the grid.
    """
    best_bid = state.book.best_bid
    if best_bid is not None:
        raw = Interval(best_bid + 1, best_bid + params.n)
    else:
        p = state.last_trade_price
        raw = Interval(p, p + params.n)
    return raw.clip(1, params.N)


def apply_event(
    state: AuctionState,
    event: Event,
    draw: PriceDraw,
    params: ModelParams,
) -> Tuple[AuctionState, Optional[Trade]]:
    """
    Apply one order arrival to the auction.

    The state is updated in place and returned.

    Args:
        state: Current auction state
        event: The arriving order
        draw: Uniform integer source used to price limit orders
        params: Model parameters

    Returns:
        (state, trade) where trade is None unless a market order executed

    Raises:
        ParameterError: If the event predates the state clock
    """
    if event.time < state.clock:
        raise ParameterError(f"event at t={event.time} precedes clock t={state.clock}")
    state.clock = event.time
    kind = event.kind
    book = state.book

    if kind is EventKind.LIMIT_BID or kind is EventKind.LIMIT_ASK:
        if kind is EventKind.LIMIT_BID:
            interval = bid_interval(state, params)
        else:
            interval = ask_interval(state, params)
        if not interval.is_empty:
            book.add(kind.side, draw(interval.lo, interval.hi))
        return state, None

    # Market orders on an empty side are discarded.
    hit = book.pop_best(kind.side)
    if hit is None:
        return state, None
    price = hit[0]
    state.last_trade_price = price
    state.trade_count += 1
    return state, Trade(price, event.time)
