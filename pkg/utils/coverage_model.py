"""
网络模型模块

把物理网络参数 (λ, T, μ, σ², α, 衰落分布) 映射为被积函数参数 (A, B)：
    β = (2(μT)^{2/α}/α)·E_g[g^{2/α}(Γ(−2/α, μTg) − Γ(−2/α))]
    A = πλβ,  B = μTσ²,  p_c = πλ·I

β 与 λ、σ² 无关，扫描 SNR 时只需计算一次，因此用 LRU 缓存按参数值记忆。
"""

import logging
import math
import threading
from typing import Optional

import numpy as np
from cachetools import LRUCache, cached

from .constants import BETA_CACHE_MAXSIZE, BETA_TOL, COVERAGE_RANGE_SLACK
from .exception_handlers import CoverageRangeError, DomainError
from .models import DerivedParams, NetworkParams
from .quadrature import integrate_semi_infinite
from .specfun import gamma, upper_incomplete_gamma
from .validators import Validators


logger = logging.getLogger(__name__)

_BETA_CACHE = LRUCache(maxsize=BETA_CACHE_MAXSIZE)
_BETA_LOCK = threading.Lock()


@cached(cache=_BETA_CACHE, lock=_BETA_LOCK)
def _beta(alpha: float, mu_T: float, fading, tol: float) -> float:
    delta = 2.0 / alpha
    gamma_neg_delta = gamma(1.0 - delta) / (-delta)

    moment = fading.moment(delta)
    if moment is None:
        moment = integrate_semi_infinite(
            lambda g: fading.pdf(g) * np.power(g, delta), tol, scale=fading.scale
        ).value

    # Γ(−δ)·E[g^δ] < 0，两项同号相加；g^δ·Γ(−δ, μTg) 在 g → 0 时趋于 (μT)^{−δ}/δ
    magnitude = abs(gamma_neg_delta) * moment + mu_T ** (-delta) / delta

    def weighted_tail(g: np.ndarray) -> np.ndarray:
        tails = np.array([upper_incomplete_gamma(-delta, mu_T * value) for value in g])
        return fading.pdf(g) * np.power(g, delta) * tails

    expectation = integrate_semi_infinite(weighted_tail, tol * magnitude, scale=fading.scale)
    beta = delta * mu_T ** delta * (expectation.value - gamma_neg_delta * moment)
    logger.debug(
        f"β 计算完成: α={alpha}, μT={mu_T}, β={beta:.12g}, 积分求值 {expectation.evaluations} 次"
    )
    return beta


def compute_beta(params: NetworkParams, tol: float = BETA_TOL) -> float:
    """计算 β，1/β 为干扰受限时的最大覆盖概率

    期望 E_g[·] 对衰落密度做半无穷积分；Γ(−2/α) 由 Γ(1−2/α)/(−2/α) 得到。
    结果按 (α, μT, 衰落分布, tol) 缓存。

    Args:
        params (NetworkParams): 网络参数（λ 与 σ² 不参与计算）
        tol (float): 期望积分的相对容差

    Returns:
        float: β > 0

    Raises:
        DomainError: α = 2（Γ(−1) 为极点，需由调用方提供 β）
        ConvergenceError: 期望积分未收敛

    Example:
        >>> net = NetworkParams(lam=1e-6, T=1.0, mu=1.0, sigma2=0.0, alpha=4.0)
        >>> compute_beta(net)  # 1 + π/4
        1.7853981633974483
    """
    tol = Validators.validate_positive("tol", tol)
    if params.alpha == 2.0:
        raise DomainError("α = 2 时 Γ(−2/α) = Γ(−1) 为极点，无法计算 β，请通过 beta 参数直接给定")
    return _beta(params.alpha, params.mu * params.T, params.resolved_fading(), tol)


def clear_beta_cache() -> None:
    """清空 β 缓存"""
    with _BETA_LOCK:
        _BETA_CACHE.clear()


def derive(params: NetworkParams, beta: Optional[float] = None, tol: float = BETA_TOL) -> DerivedParams:
    """导出 (β, A, B)

    Args:
        params (NetworkParams): 网络参数
        beta (Optional[float]): 直接给定的 β；为 None 时调用 compute_beta
        tol (float): 计算 β 时的相对容差

    Returns:
        DerivedParams: β, A = πλβ, B = μTσ²
    """
    if beta is None:
        beta = compute_beta(params, tol)
    else:
        beta = Validators.validate_positive("beta", beta)
    return DerivedParams(
        beta=beta,
        A=math.pi * params.lam * beta,
        B=params.mu * params.T * params.sigma2,
    )


def coverage_probability(I_value: float, lam: float) -> float:
    """覆盖概率 p_c = πλ·I

    Raises:
        DomainError: I 为负或 λ 非正
        CoverageRangeError: 结果超过 1 + 1e-6，说明输入不一致
    """
    I_value = Validators.validate_nonnegative("I", I_value)
    lam = Validators.validate_positive("lambda", lam)
    pc = math.pi * lam * I_value
    if pc > 1.0 + COVERAGE_RANGE_SLACK:
        raise CoverageRangeError(f"覆盖概率 {pc} 超过 1，I 与 λ 不一致")
    return pc


def db_to_linear(value_db: float) -> float:
    """dB 转线性值"""
    return 10.0 ** (Validators.validate_finite("dB", value_db) / 10.0)


def snr_db_to_sigma2(snr_db: float) -> float:
    """SNR（dB）转噪声方差 σ² = 10^{−SNR/10}

    Example:
        >>> snr_db_to_sigma2(10)
        0.1
    """
    return 10.0 ** (-Validators.validate_finite("snr_db", snr_db) / 10.0)


def sigma2_to_snr_db(sigma2: float) -> float:
    """噪声方差转 SNR（dB），σ² = 0 时为 +inf"""
    sigma2 = Validators.validate_nonnegative("sigma2", sigma2)
    if sigma2 == 0.0:
        return math.inf
    return -10.0 * math.log10(sigma2)
