"""
Empirical distribution machinery and two-sample KS tests.
"""

from pycda.stats.empirical import (
    Ecdf,
    Histogram,
    ecdf,
    histogram,
    mean_and_stderr,
    skewness,
    total_variation,
)
from pycda.stats.ks import KsResult, ks_statistic, ks_two_sample

__all__ = [
    'Ecdf', 'Histogram', 'ecdf', 'histogram', 'mean_and_stderr', 'skewness',
    'total_variation', 'KsResult', 'ks_statistic', 'ks_two_sample',
]
