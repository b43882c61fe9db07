"""
Tests for the core model types, the order book and the auction rules.
"""

import numpy as np
import pytest

from pycda.core.base import EVENT_KINDS, Event, EventKind, Interval, ModelParams, Side, Trade
from pycda.core.book import AuctionState, OrderBook, apply_event, ask_interval, bid_interval
from pycda.core.exceptions import CdaError, ParameterError
from pycda.core.rng import RngSpec, Stream, make_rng, replicate_specs


def lowest(lo, hi):
    return lo


def highest(lo, hi):
    return hi


class TestModelParams:
    """Tests for ModelParams validation and derived quantities."""

    def test_from_rho(self):
        """Test that parameters built from rho carry the derived rates."""
        params = ModelParams.from_rho(10, 5, 0.5, mu=2.0)
        assert params.lam == pytest.approx(1.0)
        assert params.rho == pytest.approx(0.5)
        assert params.total_rate == pytest.approx(6.0)

    def test_opening_price_is_median(self):
        """Test that the opening price is the median price."""
        assert ModelParams.from_rho(10, 2, 0.1).opening_price == 5
        assert ModelParams.from_rho(11, 1, 0.1).opening_price == 6

    @pytest.mark.parametrize("kwargs", [
        dict(N=1, n=1, lam=1.0),
        dict(N=10, n=0, lam=1.0),
        dict(N=10, n=2, lam=0.0),
        dict(N=10, n=2, lam=1.0, mu=-1.0),
    ])
    def test_rejects_invalid(self, kwargs):
        """Test that invalid parameters raise ParameterError."""
        with pytest.raises(ParameterError):
            ModelParams(**kwargs)

    def test_error_hierarchy(self):
        """Test that ParameterError is a ValueError and a CdaError."""
        with pytest.raises(ValueError):
            ModelParams.from_rho(10, 2, 0.0)
        assert issubclass(ParameterError, CdaError)

    def test_check_price(self):
        """Test that off-grid prices are rejected."""
        params = ModelParams.from_rho(10, 2, 0.1)
        assert params.check_price(10) == 10
        with pytest.raises(ParameterError):
            params.check_price(11)

    def test_mirror(self):
        """Test that mirroring is an involution on the grid."""
        params = ModelParams.from_rho(10, 2, 0.1)
        assert params.mirror(1) == 10
        assert params.mirror(params.mirror(4)) == 4


class TestInterval:
    """Tests for closed integer intervals."""

    def test_clip_and_len(self):
        """Test that clipping bounds the interval."""
        interval = Interval(-1, 3).clip(1, 10)
        assert interval == Interval(1, 3)
        assert len(interval) == 3
        assert list(interval) == [1, 2, 3]

    def test_empty(self):
        """Test that an interval clipped off the grid is empty."""
        interval = Interval(0, 0).clip(1, 10)
        assert interval.is_empty
        assert len(interval) == 0
        assert 0 not in interval

    def test_mirrored(self):
        """Test that mirroring maps the interval through the centre."""
        assert Interval(1, 3).mirrored(10) == Interval(8, 10)


class TestOrderBook:
    """Tests for the price-time priority book."""

    def test_best_quotes(self):
        """Test that best quotes follow the highest bid and lowest ask."""
        book = OrderBook(10)
        book.add(Side.BID, 3)
        book.add(Side.BID, 5)
        book.add(Side.ASK, 8)
        book.add(Side.ASK, 7)
        assert book.best_bid == 5
        assert book.best_ask == 7
        assert book.depth(Side.BID) == 2

    def test_fifo_within_level(self):
        """Test that orders at one price leave in arrival order."""
        book = OrderBook(10)
        first = book.add(Side.ASK, 6)
        second = book.add(Side.ASK, 6)
        assert book.pop_best(Side.ASK) == (6, first)
        assert book.pop_best(Side.ASK) == (6, second)
        assert book.pop_best(Side.ASK) is None

    def test_best_refreshes_when_level_empties(self):
        """Test that the best quote moves on when its level empties."""
        book = OrderBook(10)
        book.add(Side.BID, 4)
        book.add(Side.BID, 2)
        book.pop_best(Side.BID)
        assert book.best_bid == 2
        book.pop_best(Side.BID)
        assert book.best_bid is None
        assert book.is_empty()

    def test_rejects_off_grid(self):
        """Test that the book rejects prices off the grid."""
        with pytest.raises(ParameterError):
            OrderBook(10).add(Side.BID, 11)


class TestPlacementIntervals:
    """Tests for where limit orders may be placed."""

    def test_empty_book_anchors_at_last_trade(self, small_params):
        """Test that empty-book intervals are anchored at the last trade price."""
        state = AuctionState.opening(small_params)
        assert bid_interval(state, small_params) == Interval(3, 5)
        assert ask_interval(state, small_params) == Interval(5, 7)

    def test_resting_quotes_bound_the_other_side(self, small_params):
        """Test that resting quotes bound the placement interval of the other side."""
        state = AuctionState.opening(small_params)
        state.book.add(Side.ASK, 6)
        state.book.add(Side.BID, 2)
        assert bid_interval(state, small_params) == Interval(4, 5)
        assert ask_interval(state, small_params) == Interval(3, 4)

    def test_clipped_at_grid_edges(self, small_params):
        """Test that placement intervals are clipped to the grid."""
        state = AuctionState.opening(small_params, price=1)
        assert bid_interval(state, small_params) == Interval(1, 1)
        state.book.add(Side.ASK, 1)
        assert bid_interval(state, small_params).is_empty

    def test_mirror_symmetry(self, small_params):
        """Test that the ask interval is the mirror of the bid interval."""
        state = AuctionState.opening(small_params, price=3)
        mirrored = AuctionState.opening(small_params, price=small_params.mirror(3))
        assert ask_interval(mirrored, small_params) == bid_interval(state, small_params).mirrored(10)


class TestApplyEvent:
    """Tests for the auction rules."""

    def test_market_order_on_empty_side_is_discarded(self, small_params):
        """Test that a market order against an empty side changes only the clock."""
        state = AuctionState.opening(small_params)
        state, trade = apply_event(state, Event(EventKind.MARKET_BUY, 1.0), lowest, small_params)
        assert trade is None
        assert state.book.is_empty()
        assert state.clock == 1.0
        assert state.last_trade_price == 5

    def test_limit_then_market_trades(self, small_params):
        """Test that a market sell executes against the resting bid."""
        state = AuctionState.opening(small_params)
        apply_event(state, Event(EventKind.LIMIT_BID, 1.0), lowest, small_params)
        assert state.book.best_bid == 3
        state, trade = apply_event(state, Event(EventKind.MARKET_SELL, 2.0), lowest, small_params)
        assert trade == Trade(3, 2.0)
        assert state.last_trade_price == 3
        assert state.trade_count == 1
        assert state.book.is_empty()

    def test_market_buy_lifts_best_ask(self, small_params):
        """Test that a market buy takes the lowest ask."""
        state = AuctionState.opening(small_params)
        apply_event(state, Event(EventKind.LIMIT_ASK, 1.0), highest, small_params)
        apply_event(state, Event(EventKind.LIMIT_ASK, 2.0), lowest, small_params)
        _, trade = apply_event(state, Event(EventKind.MARKET_BUY, 3.0), lowest, small_params)
        assert trade.price == 5
        assert state.book.best_ask == 7

    def test_impossible_limit_order_is_dropped(self, small_params):
        """Test that a limit order with an empty interval is dropped."""
        state = AuctionState.opening(small_params, price=1)
        state.book.add(Side.ASK, 1)
        apply_event(state, Event(EventKind.LIMIT_BID, 1.0), lowest, small_params)
        assert state.book.is_empty(Side.BID)

    def test_rejects_time_going_backwards(self, small_params):
        """Test that events earlier than the clock are rejected."""
        state = AuctionState.opening(small_params)
        apply_event(state, Event(EventKind.MARKET_BUY, 2.0), lowest, small_params)
        with pytest.raises(ParameterError):
            apply_event(state, Event(EventKind.MARKET_BUY, 1.0), lowest, small_params)

    def test_event_kind_sides(self):
        """Test that event kinds know their side and mirror image."""
        assert EventKind.MARKET_BUY.side is Side.ASK
        assert EventKind.MARKET_SELL.side is Side.BID
        assert EventKind.LIMIT_BID.mirrored() is EventKind.LIMIT_ASK
        assert EventKind.LIMIT_ASK.is_limit and not EventKind.MARKET_SELL.is_limit

    def test_mirrored_sequence_gives_mirrored_state(self, small_params):
        """Test that mirrored events and draws keep the two books mirror images."""
        mirror = small_params.mirror
        gen = np.random.default_rng(31)
        kinds = [EVENT_KINDS[i] for i in gen.integers(4, size=400)]
        offsets = gen.random(400)
        state = AuctionState.opening(small_params, price=4)
        image = AuctionState.opening(small_params, price=mirror(4))
        for t, (kind, u) in enumerate(zip(kinds, offsets), start=1):
            def offset(lo, hi):
                return int(u * (hi - lo + 1))

            _, trade = apply_event(state, Event(kind, float(t)), lambda lo, hi: lo + offset(lo, hi), small_params)
            _, image_trade = apply_event(
                image, Event(kind.mirrored(), float(t)), lambda lo, hi: hi - offset(lo, hi), small_params)
            assert (trade is None) == (image_trade is None)
            if trade is not None:
                assert image_trade == Trade(mirror(trade.price), trade.time)
            assert [mirror(p) for p in state.book.prices(Side.BID)] == image.book.prices(Side.ASK)
            assert [mirror(p) for p in state.book.prices(Side.ASK)] == image.book.prices(Side.BID)
            assert image.last_trade_price == mirror(state.last_trade_price)


class TestRng:
    """Tests for seeded stream derivation."""

    def test_same_spec_same_numbers(self):
        """Test that the same spec yields the same numbers."""
        a = RngSpec(42, 3).generator().random(5)
        b = RngSpec(42, 3).generator().random(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        """Test that stream index and role each give a distinct stream."""
        a = RngSpec(42, 0).generator().random(5)
        b = RngSpec(42, 1).generator().random(5)
        c = RngSpec(42, 0, Stream.MIXTURE).generator().random(5)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_make_rng_accepts_seeds(self):
        """Test that make_rng passes generators through and seeds ints."""
        gen = np.random.default_rng(1)
        assert make_rng(gen) is gen
        np.testing.assert_array_equal(make_rng(7).random(3), RngSpec(7).generator().random(3))

    def test_replicate_specs(self):
        """Test that replicate specs are numbered from start."""
        specs = replicate_specs(9, 3, start=5)
        assert [s.stream_index for s in specs] == [5, 6, 7]
        assert specs[0].to_dict() == {"master_seed": 9, "stream_index": 5, "role": "replicate"}
