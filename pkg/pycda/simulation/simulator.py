"""
Event-driven Monte Carlo engine for the double auction.

The four Poisson order streams are sampled as one superposed stream of rate
2*lambda + 2*mu whose events are labelled by a categorical draw. While the
book is completely empty every market order is a no-op, so the simulator
can jump straight to the next limit order: the number of arrivals up to it
is geometric and the elapsed time is Gamma distributed. The jump is exact
in distribution and is what makes the low-traffic regime affordable.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from pycda.chain.distribution import PriceDistribution
from pycda.core.base import Event, EventKind, ModelParams, Price, Trade
from pycda.core.book import AuctionState, PriceDraw, apply_event
from pycda.core.exceptions import EmptySampleError, ParameterError
from pycda.core.rng import RngLike, RngSpec, make_rng, replicate_specs
from pycda.simulation.replicates import run_replicates

logger = logging.getLogger(__name__)

DEFAULT_FPT_CAP = 10**9
_CHUNK = 8192


def event_probabilities(params: ModelParams) -> np.ndarray:
    """Categorical law of the next event kind, in EVENT_KINDS order."""
    return np.array([params.lam, params.lam, params.mu, params.mu]) / params.total_rate


def _kind_thresholds(params: ModelParams) -> Tuple[float, float, float]:
    probs = event_probabilities(params)
    cumulative = np.cumsum(probs)
    return float(cumulative[0]), float(cumulative[1]), float(cumulative[2])


def _kind_for(u: float, thresholds: Tuple[float, float, float]) -> EventKind:
    if u < thresholds[0]:
        return EventKind.LIMIT_BID
    if u < thresholds[1]:
        return EventKind.LIMIT_ASK
    if u < thresholds[2]:
        return EventKind.MARKET_BUY
    return EventKind.MARKET_SELL


def next_event(params: ModelParams, rng: RngLike = None, clock: float = 0.0) -> Event:
    """
    Sample the next arrival of the superposed order stream.

    Args:
        params: Model parameters
        rng: Seed, RngSpec or Generator
        clock: Current time

    Returns:
        Event at clock + Exp(2 lambda + 2 mu)
    """
    gen = make_rng(rng)
    gap = gen.exponential(1.0 / params.total_rate)
    return Event(_kind_for(gen.random(), _kind_thresholds(params)), clock + gap)


class EventStream:
    """
    Buffered sampler of (gap, kind) pairs for the superposed stream.
    """

    def __init__(self, params: ModelParams, gen: np.random.Generator, chunk: int = _CHUNK):
        self._gen = gen
        self._scale = 1.0 / params.total_rate
        self._thresholds = _kind_thresholds(params)
        self._chunk = chunk
        self._gaps: List[float] = []
        self._uniforms: List[float] = []
        self._pos = 0

    def _refill(self) -> None:
        self._gaps = self._gen.exponential(self._scale, self._chunk).tolist()
        self._uniforms = self._gen.random(self._chunk).tolist()
        self._pos = 0

    def next(self) -> Tuple[float, EventKind]:
        if self._pos >= len(self._gaps):
            self._refill()
        i = self._pos
        self._pos += 1
        return self._gaps[i], _kind_for(self._uniforms[i], self._thresholds)

    def __iter__(self) -> Iterator[Tuple[float, EventKind]]:
        while True:
            yield self.next()


class UniformDraw:
    """
    Buffered uniform integer source: draw(lo, hi) is uniform on [lo, hi].
    """

    def __init__(self, gen: np.random.Generator, chunk: int = _CHUNK):
        self._gen = gen
        self._chunk = chunk
        self._buffer: List[float] = []
        self._pos = 0

    def __call__(self, lo: int, hi: int) -> int:
        if self._pos >= len(self._buffer):
            self._buffer = self._gen.random(self._chunk).tolist()
            self._pos = 0
        u = self._buffer[self._pos]
        self._pos += 1
        return lo + int(u * (hi - lo + 1))


class StepUnit(Enum):
    """What a simulation step counts."""

    EVENTS = "events"
    TRADES = "trades"


@dataclass
class PricePath:
    """
    Trades of one simulated run.

    Attributes:
        trades: Executions in time order
        events_seen: Number of order arrivals processed
        final_state: Auction state after the last event
    """

    trades: List[Trade]
    events_seen: int
    final_state: AuctionState

    @property
    def prices(self) -> np.ndarray:
        return np.array([t.price for t in self.trades], dtype=int)

    @property
    def times(self) -> np.ndarray:
        return np.array([t.time for t in self.trades], dtype=float)


@dataclass(frozen=True)
class FptSample:
    """
    First trade at price 1 or N.

    Attributes:
        hit_time: Time of the hitting trade (time of the cap when censored)
        events: Order arrivals up to and including the hit
        hit_price: 1 or N; None when censored
        censored: True when the event cap stopped the run first
    """

    hit_time: float
    events: int
    hit_price: Optional[Price]
    censored: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hit_time": self.hit_time,
            "events": self.events,
            "hit_price": self.hit_price,
            "censored": self.censored,
        }


class AuctionSimulator:
    """
    Drives one auction from its opening state.

    Events and price draws come either from a generator (the normal case)
    or from scripted sources, which disables the empty-book jump.
    """

    def __init__(
        self,
        params: ModelParams,
        opening: Optional[Price] = None,
        rng: RngLike = None,
        fast_forward: bool = True,
        events: Optional[Iterator[Event]] = None,
        draw: Optional[PriceDraw] = None,
    ):
        """
        Initialize a simulator.

        Args:
            params: Model parameters
            opening: Opening price, floor((N+1)/2) by default
            rng: Seed, RngSpec or Generator
            fast_forward: Jump over no-op market orders on an empty book
            events: Scripted event sequence replacing the random stream
            draw: Scripted price source replacing the random one
        """
        self.params = params
        self.state = AuctionState.opening(params, opening)
        self.events_seen = 0
        self._gen = make_rng(rng)
        self._scripted = iter(events) if events is not None else None
        self._stream = EventStream(params, self._gen) if events is None else None
        self._draw = draw if draw is not None else UniformDraw(self._gen)
        self.fast_forward = fast_forward and events is None
        self._limit_share = 2.0 * params.lam / params.total_rate
        self._scale = 1.0 / params.total_rate

    def _next_event(self) -> Optional[Event]:
        if self._scripted is not None:
            return next(self._scripted, None)
        gap, kind = self._stream.next()
        return Event(kind, self.state.clock + gap)

    def _jump_to_limit(self, budget: Optional[int]) -> Optional[Event]:
        arrivals = int(self._gen.geometric(self._limit_share))
        if budget is not None and arrivals > budget:
            # the whole budget is spent on discarded market orders
            self.state.clock += float(self._gen.gamma(budget, self._scale))
            self.events_seen += budget
            return None
        gap = float(self._gen.gamma(arrivals, self._scale))
        self.events_seen += arrivals - 1
        kind = EventKind.LIMIT_BID if self._gen.random() < 0.5 else EventKind.LIMIT_ASK
        return Event(kind, self.state.clock + gap)

    def step(self, budget: Optional[int] = None) -> Optional[Trade]:
        """
        Process the next arrival.

        Args:
            budget: Largest number of arrivals this step may consume

        Returns:
            The trade it produced, if any
        """
        if self.fast_forward and self.state.book.is_empty():
            event = self._jump_to_limit(budget)
        else:
            event = self._next_event()
        if event is None:
            return None
        self.events_seen += 1
        _, trade = apply_event(self.state, event, self._draw, self.params)
        return trade

    def run(self, max_events: int) -> List[Trade]:
        """Process arrivals until max_events have been seen."""
        trades = []
        while self.events_seen < max_events:
            before = self.events_seen
            trade = self.step(budget=max_events - self.events_seen)
            if trade is not None:
                trades.append(trade)
            elif self.events_seen == before:
                break  # scripted source exhausted
        return trades


def run_path(
    params: ModelParams,
    opening: Optional[Price],
    max_events: int,
    rng: RngLike = None,
    fast_forward: bool = True,
) -> PricePath:
    """
    Simulate max_events order arrivals from an empty book.

    Args:
        params: Model parameters
        opening: Opening price (None for the median price)
        max_events: Number of arrivals
        rng: Seed, RngSpec or Generator
        fast_forward: Allow the empty-book jump
    """
    if max_events < 0:
        raise ParameterError(f"max_events must be >= 0, got {max_events}")
    sim = AuctionSimulator(params, opening, rng, fast_forward=fast_forward)
    trades = sim.run(max_events)
    return PricePath(trades=trades, events_seen=sim.events_seen, final_state=sim.state)


def equilibrium_histogram(
    params: ModelParams,
    opening: Optional[Price],
    steps: int,
    burn_in: Optional[int] = None,
    rng: RngLike = None,
    unit: StepUnit = StepUnit.EVENTS,
) -> PriceDistribution:
    """
    Empirical trade-price frequencies after burn-in.

    By default steps are order arrivals, so trades within the first burn_in
    arrivals are discarded. Discarded market orders on an empty book count
    as arrivals too, which makes low-traffic runs sparse in trades.

    Args:
        params: Model parameters
        opening: Opening price (None for the median price)
        steps: Run length, counted in ``unit``
        burn_in: Leading steps whose trades are discarded; steps // 10 if None
        rng: Seed, RngSpec or Generator
        unit: Count steps as order arrivals or as trades (chain iterations)

    Raises:
        ParameterError: Unless steps > burn_in >= 0
        EmptySampleError: If no trade survives the burn-in
    """
    skip = steps // 10 if burn_in is None else burn_in
    if not steps > skip >= 0:
        raise ParameterError(f"need steps > burn_in >= 0, got steps={steps}, burn_in={skip}")
    sim = AuctionSimulator(params, opening, rng)
    counts = np.zeros(params.N, dtype=np.int64)

    if unit is StepUnit.TRADES:
        seen = 0
        while seen < steps:
            trade = sim.step()
            if trade is not None:
                seen += 1
                if seen > skip:
                    counts[trade.price - 1] += 1
    else:
        while sim.events_seen < steps:
            trade = sim.step(budget=steps - sim.events_seen)
            if trade is not None and sim.events_seen > skip:
                counts[trade.price - 1] += 1

    if counts.sum() == 0:
        raise EmptySampleError(f"no trades after burn-in of {skip} {unit.value}")
    logger.debug("histogram from %d trades over %d arrivals", counts.sum(), sim.events_seen)
    return PriceDistribution.from_counts(counts)


def first_passage_sample(
    params: ModelParams,
    rng: RngLike = None,
    max_events: int = DEFAULT_FPT_CAP,
) -> FptSample:
    """
    Run from the median price until the first trade at 1 or N.

    Args:
        params: Model parameters (N >= 3)
        rng: Seed, RngSpec or Generator
        max_events: Arrival cap; a run reaching it is reported as censored
    """
    if params.N < 3:
        raise ParameterError(f"first passage needs N >= 3, got N={params.N}")
    sim = AuctionSimulator(params, rng=rng)
    boundary = (1, params.N)
    while sim.events_seen < max_events:
        trade = sim.step(budget=max_events - sim.events_seen)
        if trade is not None and trade.price in boundary:
            return FptSample(hit_time=trade.time, events=sim.events_seen, hit_price=trade.price)
    logger.warning("first passage censored after %d arrivals", sim.events_seen)
    return FptSample(hit_time=sim.state.clock, events=sim.events_seen, hit_price=None, censored=True)


def _first_passage_task(payload: Tuple[ModelParams, RngSpec, int]) -> FptSample:
    params, spec, cap = payload
    return first_passage_sample(params, spec, cap)


def first_passage_batch(
    params: ModelParams,
    replicates: int,
    seed: int,
    workers: int = 1,
    max_events: int = DEFAULT_FPT_CAP,
) -> List[FptSample]:
    """
    Independent first-passage replicates; replicate i uses RngSpec(seed, i).
    """
    if replicates < 1:
        raise ParameterError(f"replicates must be >= 1, got {replicates}")
    payloads = [(params, spec, max_events) for spec in replicate_specs(seed, replicates)]
    samples = run_replicates(_first_passage_task, payloads, workers)
    censored = sum(s.censored for s in samples)
    if censored:
        logger.warning("%d of %d first-passage replicates censored", censored, replicates)
    return samples


def passage_times(samples: List[FptSample]) -> np.ndarray:
    """Hit times of the uncensored samples."""
    return np.array([s.hit_time for s in samples if not s.censored], dtype=float)
