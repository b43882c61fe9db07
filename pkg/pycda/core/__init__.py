"""
Core types of pycda: model parameters, the order book, random streams,
configuration and the error hierarchy.
"""

from pycda.core.base import EVENT_KINDS, Event, EventKind, Interval, ModelParams, Side, Trade
from pycda.core.book import AuctionState, OrderBook, apply_event, ask_interval, bid_interval
from pycda.core.config import ExperimentConfig
from pycda.core.exceptions import CdaError, EmptySampleError, ParameterError, SolverError
from pycda.core.rng import RngSpec, Stream, make_rng, replicate_specs
