"""网络模型测试"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pytest

from tests.conftest import oracle, pi_lambda
from utils import coverage_model
from utils.constants import DEFAULT_LAMBDA
from utils.coverage_model import (
    clear_beta_cache, compute_beta, coverage_probability, db_to_linear, derive,
    sigma2_to_snr_db, snr_db_to_sigma2,
)
from utils.exception_handlers import CoverageRangeError, DomainError
from utils.models import ExponentialFading, IntegralParams, NetworkParams
from utils.quadrature import integrate_interval


def rayleigh_beta(T: float, alpha: float) -> float:
    """瑞利衰落下 β = 1 + T^{2/α}∫_{T^{−2/α}}^∞ du/(1 + u^{α/2})

    代换 u = v^{−m}，m = 2/(α−2)，化为有限区间上的光滑积分。
    """
    m = 2.0 / (alpha - 2.0)
    upper = T ** ((alpha - 2.0) / alpha)
    power = alpha / (alpha - 2.0)
    integral = integrate_interval(lambda v: 1.0 / (1.0 + v ** power), 0.0, upper, 1e-14).value
    return 1.0 + T ** (2.0 / alpha) * m * integral


@dataclass(frozen=True)
class NumericExponentialFading:
    """没有闭式矩的指数衰落，用于走数值积分分支"""
    mean: float = 1.0

    def pdf(self, g: np.ndarray) -> np.ndarray:
        return np.exp(-g / self.mean) / self.mean

    def moment(self, s: float) -> Optional[float]:
        return None

    @property
    def scale(self) -> float:
        return self.mean


def network(alpha: float = 3.0, T: float = 1.0, mu: float = 1.0, sigma2: float = 0.0, **kwargs) -> NetworkParams:
    return NetworkParams(lam=DEFAULT_LAMBDA, T=T, mu=mu, sigma2=sigma2, alpha=alpha, **kwargs)


class TestComputeBeta:

    def test_alpha4_unit_threshold(self, fresh_beta_cache):
        assert compute_beta(network(alpha=4.0)) == pytest.approx(1.0 + math.pi / 4.0, rel=1e-9)

    @pytest.mark.parametrize("alpha", [2.5, 3.0, 3.7, 4.0, 5.0, 6.5])
    @pytest.mark.parametrize("T", [0.1, 1.0, 10.0])
    def test_matches_rayleigh_closed_integral(self, fresh_beta_cache, alpha, T):
        assert compute_beta(network(alpha=alpha, T=T)) == pytest.approx(rayleigh_beta(T, alpha), rel=1e-7)

    @pytest.mark.parametrize("alpha", [2.2, 3.0, 5.0, 6.5])
    def test_greater_than_one(self, fresh_beta_cache, alpha):
        assert compute_beta(network(alpha=alpha)) > 1.0

    @pytest.mark.parametrize("alpha", [3.0, 4.0])
    def test_small_threshold_tends_to_one(self, fresh_beta_cache, alpha):
        T = 1e-6
        beta = compute_beta(network(alpha=alpha, T=T))
        assert beta == pytest.approx(1.0 + 2.0 * T / (alpha - 2.0), rel=1e-5)

    def test_increasing_in_threshold(self, fresh_beta_cache):
        betas = [compute_beta(network(T=T)) for T in (0.1, 0.5, 1.0, 3.0, 10.0)]
        assert all(lo < hi for lo, hi in zip(betas, betas[1:]))

    def test_independent_of_mu_for_matched_fading(self, fresh_beta_cache):
        # 衰落均值为 1/μ 时 β 只依赖 T
        assert compute_beta(network(mu=2.5)) == pytest.approx(compute_beta(network(mu=1.0)), rel=1e-8)

    def test_numeric_moment_branch(self, fresh_beta_cache):
        closed = compute_beta(network(alpha=3.5))
        numeric = compute_beta(network(alpha=3.5, fading=NumericExponentialFading()))
        assert numeric == pytest.approx(closed, rel=1e-8)

    def test_alpha2_is_rejected(self):
        with pytest.raises(DomainError):
            compute_beta(network(alpha=2.0))

    def test_results_are_cached(self, fresh_beta_cache):
        net = network(alpha=4.5)
        first = compute_beta(net)
        assert len(coverage_model._BETA_CACHE) == 1
        assert compute_beta(network(alpha=4.5, sigma2=3.0)) == first
        assert len(coverage_model._BETA_CACHE) == 1
        clear_beta_cache()
        assert len(coverage_model._BETA_CACHE) == 0

    def test_explicit_fading_matches_default(self, fresh_beta_cache):
        explicit = compute_beta(network(mu=2.0, fading=ExponentialFading(mean=0.5)))
        assert explicit == compute_beta(network(mu=2.0))


class TestDerive:

    def test_A_and_B(self, fresh_beta_cache):
        net = network(alpha=4.0, T=2.0, mu=1.5, sigma2=0.1)
        derived = derive(net)
        assert derived.A == pytest.approx(math.pi * DEFAULT_LAMBDA * derived.beta, rel=1e-15)
        assert derived.B == pytest.approx(1.5 * 2.0 * 0.1, rel=1e-15)

    def test_explicit_beta_skips_computation(self):
        derived = derive(network(alpha=2.0, sigma2=1.0), beta=2.0)
        assert derived.beta == 2.0
        assert derived.A == pytest.approx(2.0 * pi_lambda())

    def test_explicit_beta_must_be_positive(self):
        with pytest.raises(DomainError):
            derive(network(), beta=0.0)


class TestCoverageProbability:

    def test_scaling(self):
        assert coverage_probability(1.0, 1.0 / math.pi) == pytest.approx(1.0)
        assert coverage_probability(0.0, 1e-6) == 0.0

    def test_rejects_out_of_range(self):
        with pytest.raises(CoverageRangeError):
            coverage_probability(2.0, 1.0 / math.pi)

    def test_rejects_negative_integral(self):
        with pytest.raises(DomainError):
            coverage_probability(-0.1, 1e-6)

    @pytest.mark.parametrize("alpha", [2.5, 3.0])
    def test_high_snr_plateau_is_inverse_beta(self, fresh_beta_cache, alpha):
        net = network(alpha=alpha, sigma2=snr_db_to_sigma2(140.0))
        derived = derive(net)
        I_value = oracle(derived.A, derived.B, alpha).value
        assert coverage_probability(I_value, net.lam) == pytest.approx(1.0 / derived.beta, rel=1e-5)

    def test_stays_in_unit_interval(self, fresh_beta_cache):
        for snr_db in (-20.0, 0.0, 20.0, 60.0):
            net = network(alpha=3.5, sigma2=snr_db_to_sigma2(snr_db))
            derived = derive(net)
            pc = coverage_probability(oracle(derived.A, derived.B, 3.5).value, net.lam)
            assert 0.0 <= pc <= 1.0


class TestUnitConversion:

    def test_db_to_linear(self):
        assert db_to_linear(0.0) == 1.0
        assert db_to_linear(10.0) == pytest.approx(10.0)
        assert db_to_linear(-3.0) == pytest.approx(0.501187, rel=1e-6)

    def test_snr_round_trip_values(self):
        assert snr_db_to_sigma2(10.0) == pytest.approx(0.1)
        assert snr_db_to_sigma2(-20.0) == pytest.approx(100.0)
        assert sigma2_to_snr_db(0.01) == pytest.approx(20.0)

    def test_zero_noise_is_infinite_snr(self):
        assert sigma2_to_snr_db(0.0) == math.inf

    def test_non_finite_db_rejected(self):
        with pytest.raises(DomainError):
            snr_db_to_sigma2(math.nan)


def test_integral_params_from_network_are_accepted(fresh_beta_cache):
    derived = derive(network(alpha=3.0, sigma2=1e-3))
    params = IntegralParams(A=derived.A, B=derived.B, alpha=3.0)
    assert params.A > 0.0 and params.B > 0.0
