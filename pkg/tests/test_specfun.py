"""特殊函数测试"""

import math

import numpy as np
import pytest

from utils.exception_handlers import DomainError, SpecfunOverflowError
from utils.quadrature import integrate_interval, integrate_semi_infinite
from utils.specfun import (
    erfc, erfcx, gamma, log_gamma, lower_incomplete_gamma, q_function, sinpi,
    upper_incomplete_gamma,
)


class TestGamma:

    def test_known_values(self):
        assert gamma(5) == 24.0
        assert gamma(1) == 1.0
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_reflection_gives_gamma_of_minus_half(self):
        assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-13)

    @pytest.mark.parametrize("x", np.round(np.arange(-9.75, 50.0, 0.37), 6).tolist())
    def test_matches_reference_on_moderate_range(self, x):
        assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-13)

    @pytest.mark.parametrize("x", [60.5, 99.9, 120.25, 150.75, 170.5, 171.5])
    def test_matches_reference_near_overflow(self, x):
        assert gamma(x) == pytest.approx(math.gamma(x), rel=5e-12)

    @pytest.mark.parametrize("x", [0, -1, -2, -7])
    def test_poles_raise_domain_error(self, x):
        with pytest.raises(DomainError):
            gamma(x)

    def test_overflow(self):
        with pytest.raises(SpecfunOverflowError):
            gamma(172.0)

    def test_sinpi_is_exact_at_integers(self):
        assert sinpi(3.0) == 0.0
        assert sinpi(-4.0) == 0.0
        assert sinpi(0.5) == 1.0
        assert sinpi(1.5) == -1.0


class TestLogGamma:

    def test_trivial_values(self):
        assert log_gamma(1) == 0.0
        assert log_gamma(2) == 0.0

    def test_integer_matches_log_factorial_sum(self):
        expected = math.fsum(math.log(k) for k in range(1, 101))
        assert log_gamma(101) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("x", [0.01, 0.3, 0.75, 1.5, 3.3, 17.2, 170.5, 1000.5, 12345.678])
    def test_matches_reference(self, x):
        assert log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-12, abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
    def test_nonpositive_raises(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestIncompleteGamma:

    def test_upper_exponential_case(self):
        assert upper_incomplete_gamma(1, 2) == pytest.approx(math.exp(-2.0), rel=1e-13)

    def test_upper_small_z_tends_to_gamma(self):
        assert upper_incomplete_gamma(0.5, 1e-12) == pytest.approx(math.sqrt(math.pi), rel=1e-5)

    def test_upper_negative_half_matches_quadrature(self):
        reference = integrate_semi_infinite(lambda u: (1.0 + u) ** -1.5 * np.exp(-(1.0 + u)), 1e-13).value
        assert upper_incomplete_gamma(-0.5, 1.0) == pytest.approx(reference, rel=1e-10)
        # Γ(−1/2, 1) = 2(e^{−1} − √π·erfc(1))
        closed_form = 2.0 * (math.exp(-1.0) - math.sqrt(math.pi) * math.erfc(1.0))
        assert upper_incomplete_gamma(-0.5, 1.0) == pytest.approx(closed_form, rel=1e-12)

    def test_recurrence(self, rng):
        for _ in range(50):
            a = rng.uniform(0.1, 5.0)
            z = rng.uniform(0.1, 10.0)
            lhs = upper_incomplete_gamma(a + 1.0, z)
            rhs = a * upper_incomplete_gamma(a, z) + z ** a * math.exp(-z)
            assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_complementarity(self, rng):
        for _ in range(50):
            a = rng.uniform(0.1, 20.0)
            z = rng.uniform(0.01, 30.0)
            total = lower_incomplete_gamma(a, z) + upper_incomplete_gamma(a, z)
            assert total == pytest.approx(gamma(a), rel=1e-10)

    def test_negative_a_matches_quadrature(self, rng):
        for _ in range(20):
            a = -float(rng.integers(0, 3)) - rng.uniform(0.1, 0.9)
            z = rng.uniform(0.2, 5.0)
            value = upper_incomplete_gamma(a, z)
            reference = integrate_semi_infinite(
                lambda u: (z + u) ** (a - 1.0) * np.exp(-(z + u)), 1e-11 * value
            ).value
            assert value == pytest.approx(reference, rel=1e-8)

    @pytest.mark.parametrize("a, z", [(-1.0, 1.0), (0.0, 2.0), (1.5, 0.0), (1.5, -1.0)])
    def test_upper_domain_errors(self, a, z):
        with pytest.raises(DomainError):
            upper_incomplete_gamma(a, z)

    def test_lower_known_values(self):
        assert lower_incomplete_gamma(1, 1) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-13)
        assert lower_incomplete_gamma(2.5, 0.0) == 0.0
        assert lower_incomplete_gamma(1.0, 3.0) == pytest.approx(-math.expm1(-3.0), rel=1e-13)

    def test_lower_matches_quadrature(self):
        reference = integrate_interval(lambda x: np.sqrt(x) * np.exp(-x), 0.0, 2.5, 1e-12).value
        assert lower_incomplete_gamma(1.5, 2.5) == pytest.approx(reference, rel=1e-10)

    @pytest.mark.parametrize("a, z", [(0.0, 1.0), (-0.5, 1.0), (1.0, -0.1)])
    def test_lower_domain_errors(self, a, z):
        with pytest.raises(DomainError):
            lower_incomplete_gamma(a, z)


class TestErrorFunctions:

    @pytest.mark.parametrize("x", np.linspace(-6.0, 26.0, 65).tolist())
    def test_erfc_matches_reference(self, x):
        assert erfc(x) == pytest.approx(math.erfc(x), rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("x", np.linspace(0.0, 6.0, 49).tolist())
    def test_erfcx_matches_reference(self, x):
        assert erfcx(x) == pytest.approx(math.exp(x * x) * math.erfc(x), rel=1e-11)

    def test_erfcx_large_argument_asymptote(self):
        x = 1e4
        assert erfcx(x) == pytest.approx(1.0 / (x * math.sqrt(math.pi)), rel=1e-8)

    def test_erfcx_large_negative_overflows(self):
        with pytest.raises(SpecfunOverflowError):
            erfcx(-30.0)


class TestQFunction:

    def test_trivial_values(self):
        assert q_function(0.0) == 0.5
        assert q_function(40.0) == pytest.approx(0.0, abs=1e-300)

    def test_one_matches_normal_tail_quadrature(self):
        reference = integrate_semi_infinite(
            lambda u: np.exp(-0.5 * (1.0 + u) ** 2) / math.sqrt(2.0 * math.pi), 1e-14
        ).value
        assert q_function(1.0) == pytest.approx(reference, abs=1e-12)
        assert q_function(1.0) == pytest.approx(0.15865525393145707, abs=1e-14)

    @pytest.mark.parametrize("x", np.linspace(0.0, 8.0, 81).tolist())
    def test_symmetry(self, x):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("x", np.linspace(-10.0, 10.0, 41).tolist())
    def test_matches_reference(self, x):
        assert q_function(x) == pytest.approx(0.5 * math.erfc(x / math.sqrt(2.0)), abs=1e-12)
