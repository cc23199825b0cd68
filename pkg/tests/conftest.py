"""测试共享夹具"""

import math

import numpy as np
import pytest

from utils.constants import DEFAULT_LAMBDA
from utils.coverage_model import clear_beta_cache
from utils.models import IntegralParams, NetworkParams
from utils.quadrature import integrate_coverage

ORACLE_TOL = 1e-12


def oracle(A: float, B: float, alpha: float, tol: float = ORACLE_TOL):
    """高精度参考积分，返回 QuadratureResult"""
    return integrate_coverage(IntegralParams(A=A, B=B, alpha=alpha), tol)


def oracle_slack(result, value: float) -> float:
    """比较近似值与参考值时允许的数值余量"""
    return result.abs_error_estimate + 1e-12 * max(1.0, abs(value))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def section3_network():
    """λ = 1/(π·500²)，μ = T = 1，α = 3 的网络"""
    return NetworkParams(lam=DEFAULT_LAMBDA, T=1.0, mu=1.0, sigma2=0.0, alpha=3.0)


@pytest.fixture
def fresh_beta_cache():
    clear_beta_cache()
    yield
    clear_beta_cache()


def pi_lambda() -> float:
    return math.pi * DEFAULT_LAMBDA
