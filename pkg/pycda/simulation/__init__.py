"""
Monte Carlo simulation of the auction and of its embedded price chain.
"""

from pycda.simulation.embedded import (
    embedded_absorption_steps,
    empirical_transitions,
    simulate_embedded_chain,
)
from pycda.simulation.replicates import run_replicates
from pycda.simulation.simulator import (
    AuctionSimulator,
    EventStream,
    FptSample,
    PricePath,
    StepUnit,
    UniformDraw,
    equilibrium_histogram,
    event_probabilities,
    first_passage_batch,
    first_passage_sample,
    next_event,
    passage_times,
    run_path,
)

__all__ = [
    'embedded_absorption_steps', 'empirical_transitions', 'simulate_embedded_chain',
    'run_replicates', 'AuctionSimulator', 'EventStream', 'FptSample', 'PricePath',
    'StepUnit', 'UniformDraw', 'equilibrium_histogram', 'event_probabilities',
    'first_passage_batch', 'first_passage_sample', 'next_event', 'passage_times', 'run_path',
]
