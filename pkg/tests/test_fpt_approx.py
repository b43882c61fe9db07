"""
Tests for the closed-form discrete passage time and the mixture lift.
"""

from fractions import Fraction

import numpy as np
import pytest

from pycda.approx import (
    MixtureApprox,
    discrete_fpt_dist,
    discrete_fpt_pmf,
    enumerate_fpt_pmf,
    expected_discrete_fpt,
    mixture_log_mean,
    mixture_mean,
    mixture_sample,
    mixture_samples,
)
from pycda.chain.solvers import mean_fpt_continuous
from pycda.core.base import ModelParams
from pycda.core.exceptions import ParameterError
from pycda.core.rng import RngSpec, Stream


class TestTwoBarrierPmf:
    """Tests for the closed-form absorption step distribution."""

    @pytest.mark.parametrize("N", [3, 5, 7, 9])
    def test_matches_path_enumeration(self, N):
        """Test that the closed form matches exact path enumeration."""
        exact = enumerate_fpt_pmf(N, 20)
        closed = discrete_fpt_pmf(N, np.arange(1, 21))
        np.testing.assert_allclose(closed, [float(x) for x in exact], atol=1e-12)

    def test_small_grid(self):
        """Test that the three-price grid is absorbed in one step."""
        assert discrete_fpt_pmf(3, 1) == pytest.approx(1.0)
        assert discrete_fpt_pmf(3, 2) == pytest.approx(0.0, abs=1e-15)
        assert enumerate_fpt_pmf(5, 3) == [Fraction(0), Fraction(1, 2), Fraction(0)]

    def test_parity(self):
        """Test that absorption from the midpoint of N=5 takes an even number of steps."""
        # from the midpoint an odd grid needs an even number of steps when N = 5
        values = discrete_fpt_pmf(5, np.arange(1, 12, 2))
        np.testing.assert_allclose(values, 0.0, atol=1e-15)

    def test_rejects_even_grid(self):
        """Test that even grids and step zero are rejected."""
        with pytest.raises(ParameterError):
            discrete_fpt_pmf(10, 3)
        with pytest.raises(ParameterError):
            discrete_fpt_pmf(5, 0)

    @pytest.mark.parametrize("N", range(3, 52, 2))
    def test_truncated_mass(self, N):
        """Test that the truncated step distribution keeps almost all mass and the right mean."""
        dist = discrete_fpt_dist(N)
        assert dist.mass >= 1 - 1e-9
        assert dist.mean() == pytest.approx(expected_discrete_fpt(N), rel=1e-6)

    def test_expected_steps(self):
        """Test that expected steps are the start distances multiplied."""
        assert expected_discrete_fpt(11) == 25
        assert expected_discrete_fpt(11, start=2) == 9

    def test_sampling(self):
        """Test that sampled step counts have the expected mean."""
        dist = discrete_fpt_dist(7)
        draws = dist.sample(RngSpec(6), size=20_000)
        assert set(np.unique(draws)) <= set(dist.h.tolist())
        assert draws.mean() == pytest.approx(9.0, rel=0.05)
        assert dist(0) == 0.0


class TestMixture:
    """Tests for the continuous-time mixture."""

    def test_parameters(self):
        """Test that the mixture rates follow from the model parameters."""
        approx = MixtureApprox(ModelParams.from_rho(11, 1, 1.0))
        assert approx.move_prob == pytest.approx(0.25)
        assert approx.event_time_scale == pytest.approx(0.25)

    @pytest.mark.parametrize("N", [11, 21, 51])
    @pytest.mark.parametrize("rho", [0.01, 0.1, 0.5])
    def test_mean_matches_chain(self, N, rho):
        """Test that the mixture mean equals the chain mean passage time."""
        params = ModelParams.from_rho(N, 1, rho)
        assert mixture_mean(MixtureApprox(params), N) == pytest.approx(mean_fpt_continuous(params), rel=1e-9)

    def test_sample_mean(self):
        """Test that mixture samples are positive with the expected mean."""
        params = ModelParams.from_rho(5, 1, 0.5)
        approx = MixtureApprox(params)
        draws = mixture_samples(approx, 5, 20_000, RngSpec(3, 0, Stream.MIXTURE))
        assert np.all(draws > 0)
        assert draws.mean() == pytest.approx(mixture_mean(approx, 5), rel=0.05)

    def test_reproducible(self):
        """Test that the same spec gives the same mixture sample."""
        approx = MixtureApprox(ModelParams.from_rho(11, 1, 0.1))
        assert mixture_sample(approx, 11, RngSpec(1)) == mixture_sample(approx, 11, RngSpec(1))

    def test_log_mean(self):
        """Test that the mean log time lies below the log of the mean."""
        approx = MixtureApprox(ModelParams.from_rho(11, 1, 0.1))
        estimate = mixture_log_mean(approx, 11, 2000, RngSpec(2))
        assert estimate.samples == 2000
        assert estimate.stderr > 0
        assert estimate.mean < np.log(mixture_mean(approx, 11))

    def test_rejects_bad_sizes(self):
        """Test that bad sample sizes and even grids are rejected."""
        approx = MixtureApprox(ModelParams.from_rho(11, 1, 0.1))
        with pytest.raises(ParameterError):
            mixture_samples(approx, 11, 0)
        with pytest.raises(ParameterError):
            mixture_mean(approx, 10)
