"""
Exact low-traffic price chain.

Kernels, transition matrices (direct and block form), the invariant
distribution and absorbing mean first-passage times.
"""

from pycda.chain.distribution import PriceDistribution
from pycda.chain.kernels import (
    BlockParams,
    TransitionMatrix,
    ask_prob,
    bid_prob,
    block_matrix,
    block_params,
    transition_matrix,
)
from pycda.chain.solvers import (
    invariant_distribution,
    mean_fpt_continuous,
    mean_fpt_discrete,
    mean_fpt_vector,
    power_iteration,
    propagate_distribution,
    stationary_residual,
)

__all__ = [
    'PriceDistribution', 'BlockParams', 'TransitionMatrix',
    'ask_prob', 'bid_prob', 'block_matrix', 'block_params', 'transition_matrix',
    'invariant_distribution', 'mean_fpt_continuous', 'mean_fpt_discrete',
    'mean_fpt_vector', 'power_iteration', 'propagate_distribution', 'stationary_residual',
]
