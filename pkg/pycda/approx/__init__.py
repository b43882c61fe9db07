"""
Closed-form discrete passage times and their continuous-time mixture lift.
"""

from pycda.approx.mixture import (
    LogMeanEstimate,
    MixtureApprox,
    mixture_log_mean,
    mixture_mean,
    mixture_sample,
    mixture_samples,
)
from pycda.approx.two_barrier import (
    DiscreteFptDist,
    discrete_fpt_dist,
    discrete_fpt_pmf,
    enumerate_fpt_pmf,
    expected_discrete_fpt,
)

__all__ = [
    'LogMeanEstimate', 'MixtureApprox', 'mixture_log_mean', 'mixture_mean',
    'mixture_sample', 'mixture_samples', 'DiscreteFptDist', 'discrete_fpt_dist',
    'discrete_fpt_pmf', 'enumerate_fpt_pmf', 'expected_discrete_fpt',
]
