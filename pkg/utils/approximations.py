"""
近似方法模块

覆盖概率积分 I = ∫_0^∞ exp{−(Ax + Bx^{α/2})} dx 的闭式解与四种近似：
- 闭式解：exact_alpha2, exact_alpha4, limit_noise, limit_interference
- 极限近似：limiting_approx
- 干扰受限级数与噪声受限级数：interference_series, noise_series，附严格余项上界
- 有效区域阈值：interference_validity, noise_validity
- 拉普拉斯近似：laplace_internals, laplace_approx, laplace_error_bound
- 收敛性诊断：ratio_test_interference, ratio_test_noise, optimal_truncation_index
- 统一入口：evaluate

级数项统一按 符号·exp(对数幅值) 计算并用 math.fsum 求和，
Γ(kα/2+1) 在 k 较大时溢出，幅值只在对数域中出现。
"""

import logging
import math
from typing import List, Optional, Union

from .constants import (
    DEFAULT_RATIO_TERMS, DEFAULT_TERMS, EXP_OVERFLOW_LOG, N_MAX, SQRT_TWO,
)
from .coverage_model import derive
from .exception_handlers import (
    DegenerateInputError, DomainError, SpecfunOverflowError, UnsupportedExactError,
)
from .models import (
    ApproxMethod, ApproxResult, ConvergenceReport, ConvergenceVerdict, IntegralParams,
    LaplaceInternals, NetworkParams, ValidityReport,
)
from .specfun import (
    erfcx, gamma, log_gamma, lower_incomplete_gamma, q_function, upper_incomplete_gamma,
)
from .validators import Validators


logger = logging.getLogger(__name__)


def _exp_or_inf(log_value: float) -> float:
    """上界在对数域溢出时返回 inf 哨兵值"""
    if log_value > EXP_OVERFLOW_LOG:
        return math.inf
    return math.exp(log_value)


def _signed_exp(sign: int, log_value: float) -> float:
    if log_value > EXP_OVERFLOW_LOG:
        raise SpecfunOverflowError(f"级数项 exp({log_value:.1f}) 超出 double 范围")
    return sign * math.exp(log_value)


def _alternating_sum(first: float, log_terms: List[float]) -> float:
    """first + Σ_{k≥1} (−1)^k·exp(log_terms[k−1])

    任一项超出 double 范围时返回最大项符号的 ±inf 哨兵值。
    """
    if log_terms and max(log_terms) > EXP_OVERFLOW_LOG:
        k = 1 + log_terms.index(max(log_terms))
        return -math.inf if k % 2 else math.inf
    terms = [first]
    terms += [(-1.0 if k % 2 else 1.0) * math.exp(t) for k, t in enumerate(log_terms, start=1)]
    return math.fsum(terms)


# ========== 闭式解与极限情形 ==========

def exact_alpha2(A: float, B: float) -> float:
    """α = 2 时的精确解 I = 1/(A+B)

    Raises:
        DegenerateInputError: A = B = 0
    """
    A = Validators.validate_nonnegative("A", A)
    B = Validators.validate_nonnegative("B", B)
    if A == 0.0 and B == 0.0:
        raise DegenerateInputError("A 与 B 不能同时为 0，积分发散")
    return 1.0 / (A + B)


def exact_alpha4(A: float, B: float) -> float:
    """α = 4 时的精确解 I = √(π/B)·exp{A²/4B}·Q(A/√(2B))

    exp{A²/4B}·Q(A/√(2B)) 等于 erfcx(A/(2√B))/2，用缩放互补误差函数计算，
    A²/4B 很大时也不会溢出。

    Args:
        A (float): 非负
        B (float): 正数（B = 0 时应使用 limit_interference）

    Raises:
        DomainError: B ≤ 0 或 A < 0

    Example:
        >>> exact_alpha4(0.0, math.pi)
        0.5
    """
    A = Validators.validate_nonnegative("A", A)
    B = Validators.validate_positive("B", B)
    root_B = math.sqrt(B)
    return math.sqrt(math.pi / B) * 0.5 * erfcx(A / (2.0 * root_B))


def limit_noise(B: float, alpha: float) -> float:
    """A = 0（噪声受限）时的精确解 (2/(αB^{2/α}))·Γ(2/α)"""
    B = Validators.validate_positive("B", B)
    alpha = Validators.validate_alpha(alpha)
    return 2.0 / (alpha * B ** (2.0 / alpha)) * gamma(2.0 / alpha)


def limit_interference(A: float) -> float:
    """B = 0（干扰受限）时的精确解 1/A"""
    A = Validators.validate_positive("A", A)
    return 1.0 / A


def limiting_approx(params: IntegralParams) -> ApproxResult:
    """极限近似 [A + (α/2)·B^{2/α}/Γ(2/α)]^{-1}

    在 A = 0 或 B = 0 时退化为对应的精确解，α = 2 时对任意 (A, B) 精确。
    该近似没有余项上界。
    """
    alpha = params.alpha
    denominator = params.A + (alpha / 2.0) * params.B ** (2.0 / alpha) / gamma(2.0 / alpha)
    return ApproxResult(value=1.0 / denominator, method=ApproxMethod.LIMITING)


# ========== 干扰受限级数 ==========

def _interference_log_term(params: IntegralParams, k: int) -> float:
    # ln |a_k| = −ln A − ln k! + k·ln(B/A^{α/2}) + ln Γ(kα/2 + 1)
    log_ratio = math.log(params.B) - params.half_alpha * math.log(params.A)
    return (-math.log(params.A) - log_gamma(k + 1) + k * log_ratio
            + log_gamma(k * params.half_alpha + 1.0))


def optimal_truncation_index(params: IntegralParams, n_max: int = N_MAX) -> int:
    """干扰受限级数的最优截断项数

    余项上界在 n 处等于第 n+1 项的幅值，因此返回使 |a_{n+1}| 最小的 n ∈ [0, n_max]。

    Raises:
        DomainError: A ≤ 0
    """
    Validators.validate_positive("A", params.A)
    n_max = Validators.validate_terms(n_max, n_max=max(n_max, 0))
    if params.B == 0.0:
        return 0
    log_terms = [_interference_log_term(params, n + 1) for n in range(n_max + 1)]
    return min(range(n_max + 1), key=log_terms.__getitem__)


def interference_series(params: IntegralParams, n: int = DEFAULT_TERMS) -> ApproxResult:
    """干扰受限级数（展开 exp{−Bx^{α/2}}）

    I ≈ (1/A) Σ_{k=0}^{n} (1/k!)(−B/A^{α/2})^k Γ(kα/2 + 1)

    余项上界 (1/(n+1)!)(1/A)(B/A^{α/2})^{n+1}Γ((n+1)α/2 + 1)。
    α > 2 时级数发散，请求的 n 超过最优截断点时截断在最优截断点，
    实际项数记录在 terms_used，请求值记录在 requested_terms。

    Args:
        params (IntegralParams): A 必须大于 0
        n (int): 项数，0 ≤ n ≤ 30

    Returns:
        ApproxResult: 近似值与余项上界；某项超出 double 范围时近似值为 ±inf，上界为 inf

    Raises:
        DomainError: A ≤ 0 或 n 非法

    Example:
        >>> interference_series(IntegralParams(A=2.0, B=0.3, alpha=3.0), 0).value
        0.5
    """
    requested = Validators.validate_terms(n)
    if params.A <= 0.0:
        raise DomainError(f"干扰受限级数要求 A > 0，收到 A = {params.A}")
    if params.B == 0.0:
        return ApproxResult(
            value=1.0 / params.A, method=ApproxMethod.INTERFERENCE_SERIES,
            error_bound=0.0, terms_used=requested, requested_terms=requested,
        )

    used = requested
    if params.alpha > 2.0:
        optimal = optimal_truncation_index(params, N_MAX)
        if requested > optimal:
            used = optimal
            logger.warning(f"干扰受限级数发散，项数由 {requested} 截断为最优截断点 {optimal}")

    value = _alternating_sum(1.0 / params.A, [_interference_log_term(params, k) for k in range(1, used + 1)])
    if math.isinf(value):
        logger.warning(f"干扰受限级数的项超出 double 范围 (B/A^{{α/2}} 过大)，返回 {value}")
        bound = math.inf
    else:
        bound = _exp_or_inf(_interference_log_term(params, used + 1))
    return ApproxResult(
        value=value, method=ApproxMethod.INTERFERENCE_SERIES,
        error_bound=bound, terms_used=used, requested_terms=requested,
    )


def interference_validity(epsilon: float, n: int, net: NetworkParams,
                          beta: Optional[float] = None) -> ValidityReport:
    """干扰受限级数的有效区域

    B ≤ A^{α/2}(εK₁A)^{1/(n+1)}，K₁ = (n+1)!/Γ((n+1)α/2 + 1)，
    σ² 阈值为 B 阈值除以 μT。n → ∞ 时 α ≥ 2 的渐近值为 (πλβ)^{α/2}/(μT)，
    α < 2 时为 inf。

    Args:
        epsilon (float): 误差容限 ε（I 的绝对误差）
        n (int): 级数项数
        net (NetworkParams): 网络参数
        beta (Optional[float]): 直接给定的 β，α = 2 时必需

    Returns:
        ValidityReport: 阈值报告
    """
    epsilon = Validators.validate_positive("epsilon", epsilon)
    n = Validators.validate_terms(n)
    derived = derive(net, beta)
    A = derived.A
    half_alpha = net.alpha / 2.0
    mu_T = net.mu * net.T

    log_K1 = log_gamma(n + 2) - log_gamma((n + 1) * half_alpha + 1.0)
    log_B = half_alpha * math.log(A) + (math.log(epsilon) + log_K1 + math.log(A)) / (n + 1)
    B_threshold = _exp_or_inf(log_B)
    asymptote = A ** half_alpha / mu_T if net.alpha >= 2.0 else math.inf
    return ValidityReport(
        regime="interference", epsilon=epsilon, n=n,
        B_threshold=B_threshold, sigma2_threshold=B_threshold / mu_T,
        sigma2_asymptotic=asymptote,
    )


# ========== 噪声受限级数 ==========

def _noise_log_term(params: IntegralParams, k: int) -> float:
    # ln |a_k| = ln(2/(αB^{2/α})) − ln k! + k·ln(A/B^{2/α}) + ln Γ(2(k+1)/α)
    inv_half = 2.0 / params.alpha
    log_B_scaled = inv_half * math.log(params.B)
    return (math.log(2.0 / params.alpha) - log_B_scaled - log_gamma(k + 1)
            + k * (math.log(params.A) - log_B_scaled) + log_gamma(inv_half * (k + 1)))


def noise_series(params: IntegralParams, n: int = DEFAULT_TERMS) -> ApproxResult:
    """噪声受限级数（展开 exp{−Ax}）

    I ≈ (2/(αB^{2/α})) Σ_{k=0}^{n} (1/k!)(−A/B^{2/α})^k Γ(2(k+1)/α)

    余项上界 (1/(n+1)!)(2/(αB^{2/α}))(A/B^{2/α})^{n+1}Γ(2(n+2)/α)。
    α > 2 时级数收敛，n = 0 时与 limit_noise 完全相同。
    某项超出 double 范围时近似值为 ±inf，上界为 inf。

    Raises:
        DomainError: B ≤ 0 或 n 非法
    """
    n = Validators.validate_terms(n)
    if params.B <= 0.0:
        raise DomainError(f"噪声受限级数要求 B > 0，收到 B = {params.B}")

    if params.A == 0.0:
        return ApproxResult(
            value=limit_noise(params.B, params.alpha), method=ApproxMethod.NOISE_SERIES,
            error_bound=0.0, terms_used=n, requested_terms=n,
        )

    value = _alternating_sum(limit_noise(params.B, params.alpha),
                             [_noise_log_term(params, k) for k in range(1, n + 1)])
    if math.isinf(value):
        logger.warning(f"噪声受限级数的项超出 double 范围 (A/B^{{2/α}} 过大)，返回 {value}")
        bound = math.inf
    else:
        bound = _exp_or_inf(_noise_log_term(params, n + 1))
    return ApproxResult(
        value=value, method=ApproxMethod.NOISE_SERIES,
        error_bound=bound, terms_used=n, requested_terms=n,
    )


def noise_validity(epsilon: float, n: int, net: NetworkParams,
                   beta: Optional[float] = None) -> ValidityReport:
    """噪声受限级数的有效区域

    B ≥ (A^{n+1}/(εK₂))^{α/(2(n+2))}，K₂ = α(n+1)!/(2Γ(2(n+2)/α))。
    n → ∞ 时 σ² 阈值：α > 2 为 0，α = 2 为 πλβ/(μT)，α < 2 为 inf。
    """
    epsilon = Validators.validate_positive("epsilon", epsilon)
    n = Validators.validate_terms(n)
    derived = derive(net, beta)
    A = derived.A
    alpha = net.alpha
    mu_T = net.mu * net.T

    log_K2 = math.log(alpha / 2.0) + log_gamma(n + 2) - log_gamma(2.0 * (n + 2) / alpha)
    exponent = alpha / (2.0 * (n + 2))
    B_threshold = _exp_or_inf(exponent * ((n + 1) * math.log(A) - math.log(epsilon) - log_K2))

    if alpha > 2.0:
        asymptote = 0.0
    elif alpha == 2.0:
        asymptote = A / mu_T
    else:
        asymptote = math.inf
    return ValidityReport(
        regime="noise", epsilon=epsilon, n=n,
        B_threshold=B_threshold, sigma2_threshold=B_threshold / mu_T,
        sigma2_asymptotic=asymptote,
    )


# ========== 拉普拉斯近似 ==========

def laplace_internals(params: IntegralParams, x_hat: Optional[float] = None) -> LaplaceInternals:
    """计算 h(x) = Ax + Bx^{α/2} 在展开点 x̂ 处的二阶泰勒系数

    Args:
        params (IntegralParams): 要求 α > 2, B > 0
        x_hat (Optional[float]): 展开点，默认 (A + B^{2/α})^{-1}

    Returns:
        LaplaceInternals: x̂, a = h''(x̂)/2, b = h'(x̂), c = h(x̂), ŷ

    Raises:
        DomainError: α ≤ 2、B ≤ 0 或 x̂ ≤ 0
    """
    if params.alpha <= 2.0:
        raise DomainError(f"拉普拉斯近似要求 α > 2，收到 α = {params.alpha}")
    if params.B <= 0.0:
        raise DomainError(f"拉普拉斯近似要求 B > 0，收到 B = {params.B}")
    if x_hat is None:
        x_hat = params.natural_scale
    else:
        x_hat = Validators.validate_positive("x_hat", x_hat)

    A, B, h = params.A, params.B, params.half_alpha
    a = 0.5 * B * h * (h - 1.0) * x_hat ** (h - 2.0)
    b = A + B * h * x_hat ** (h - 1.0)
    c = A * x_hat + B * x_hat ** h
    y_hat = math.sqrt(2.0 * a) * (b / (2.0 * a) - x_hat)
    return LaplaceInternals(x_hat=x_hat, a=a, b=b, c=c, y_hat=y_hat)


def laplace_approx(params: IntegralParams, x_hat_override: Optional[float] = None) -> ApproxResult:
    """拉普拉斯近似 I ≈ √(π/a)·exp{b²/4a − c}·Q(ŷ)

    在对数域中求值：ŷ ≥ 0 时 exp{b²/4a}·Q(ŷ) 改写为 exp{bx̂ − ax̂²}·erfcx(ŷ/√2)/2。
    α = 4 时 h 恰为二次函数，结果对任意 x̂ 都精确。
    2 < α < 6 时附带余项上界，其余情形 error_bound 为 None。

    Args:
        params (IntegralParams): 要求 α > 2, B > 0
        x_hat_override (Optional[float]): 覆盖默认展开点

    Returns:
        ApproxResult: 近似值与（可能为 None 的）余项上界

    Raises:
        DomainError: α ≤ 2、B ≤ 0 或 x̂ ≤ 0
        SpecfunOverflowError: 近似值超出 double 范围

    Example:
        >>> laplace_approx(IntegralParams(A=0.0, B=math.pi, alpha=4.0)).value
        0.5
    """
    internals = laplace_internals(params, x_hat_override)
    a, b, c, x_hat, y_hat = internals.a, internals.b, internals.c, internals.x_hat, internals.y_hat

    log_value = 0.5 * math.log(math.pi / a) - c
    if y_hat >= 0.0:
        log_value += b * x_hat - a * x_hat * x_hat + math.log(0.5 * erfcx(y_hat / SQRT_TWO))
    else:
        log_value += b * b / (4.0 * a) + math.log(q_function(y_hat))
    value = _signed_exp(1, log_value)

    bound: Optional[float] = None
    if 2.0 < params.alpha < 6.0:
        bound = laplace_error_bound(params, internals)
        if bound >= value:
            logger.debug(f"拉普拉斯余项上界 {bound:.3e} 不小于近似值 {value:.3e}，上界无实际意义")
    else:
        logger.debug(f"α = {params.alpha} 不在 (2, 6) 内，拉普拉斯近似不提供余项上界")
    return ApproxResult(value=value, method=ApproxMethod.LAPLACE, error_bound=bound)


def laplace_error_bound(params: IntegralParams, internals: LaplaceInternals) -> float:
    """拉普拉斯近似的余项上界

    (K₃/a²) Σ_{k=0}^{3} C(3,k)(b²/4a)^{k/2} G(k)，乘以 exp{b²/4a − c} 换算到 I 的量级。
    K₃ = B·|C(α/2,3)|·x̂^{α/2−3}，C(α/2,3) 为广义二项式系数。
    G(k) 在 z = b²/4a 处取值：k 为偶数时等于 Γ(2−k/2, z)，奇数时等于 Γ(2−k/2) + γ(2−k/2, z)。

    Args:
        params (IntegralParams): 2 < α < 6
        internals (LaplaceInternals): laplace_internals 的结果

    Returns:
        float: 非负上界，对数域溢出时为 inf

    Raises:
        DomainError: α 不在 (2, 6) 内
    """
    if not 2.0 < params.alpha < 6.0:
        raise DomainError(f"拉普拉斯余项上界要求 2 < α < 6，收到 α = {params.alpha}")
    h = params.half_alpha
    binomial = h * (h - 1.0) * (h - 2.0) / 6.0
    if binomial == 0.0:
        return 0.0
    K3 = params.B * abs(binomial) * internals.x_hat ** (h - 3.0)
    a, b, c = internals.a, internals.b, internals.c
    z = b * b / (4.0 * a)

    log_terms = []
    for k, weight in enumerate((1.0, 3.0, 3.0, 1.0)):
        order = 2.0 - 0.5 * k
        if k % 2 == 0:
            g_value = upper_incomplete_gamma(order, z)
        else:
            g_value = gamma(order) + lower_incomplete_gamma(order, z)
        if g_value > 0.0:
            log_terms.append(math.log(weight) + 0.5 * k * math.log(z) + math.log(g_value))

    peak = max(log_terms)
    log_sum = peak + math.log(math.fsum(math.exp(term - peak) for term in log_terms))
    return _exp_or_inf(math.log(K3) - 2.0 * math.log(a) + log_sum + z - c)


# ========== 收敛性诊断 ==========

def _validate_ratio_terms(K: int) -> int:
    if isinstance(K, bool) or not isinstance(K, int) or K < 2:
        raise DomainError(f"比值判别法的项数 K 必须是 ≥ 2 的整数，收到 {K!r}")
    return K


def ratio_test_interference(params: IntegralParams, K: int = DEFAULT_RATIO_TERMS) -> ConvergenceReport:
    """干扰受限级数的比值判别

    |a_{k+1}/a_k| = (B/((k+1)A^{α/2}))·Γ((k+1)α/2 + 1)/Γ(kα/2 + 1)，k = 1..K。
    α > 2 比值趋于无穷（发散）；α = 2 比值恒为 B/A（条件收敛）；α < 2 比值趋于 0（收敛）。

    Raises:
        DomainError: A ≤ 0、B ≤ 0 或 K < 2
    """
    K = _validate_ratio_terms(K)
    A = Validators.validate_positive("A", params.A)
    B = Validators.validate_positive("B", params.B)
    h = params.half_alpha
    log_scale = math.log(B) - h * math.log(A)
    ratios = tuple(
        _exp_or_inf(log_scale - math.log(k + 1) + log_gamma((k + 1) * h + 1.0) - log_gamma(k * h + 1.0))
        for k in range(1, K + 1)
    )
    if params.alpha > 2.0:
        verdict, limit = ConvergenceVerdict.DIVERGES, math.inf
    elif params.alpha == 2.0:
        verdict, limit = ConvergenceVerdict.CONDITIONAL, B / A
    else:
        verdict, limit = ConvergenceVerdict.CONVERGES, 0.0
    return ConvergenceReport(
        series="interference", ratios=ratios, verdict=verdict, limit_expression=limit,
        optimal_truncation=optimal_truncation_index(params, min(K, N_MAX)),
    )


def ratio_test_noise(params: IntegralParams, K: int = DEFAULT_RATIO_TERMS) -> ConvergenceReport:
    """噪声受限级数的比值判别

    |a_{k+1}/a_k| = (A/((k+1)B^{2/α}))·Γ(2(k+2)/α)/Γ(2(k+1)/α)，k = 1..K。
    α > 2 比值趋于 0（收敛）；α = 2 极限为 (2/α)^{2/α}A/B^{2/α}（条件收敛）；α < 2 发散。

    Raises:
        DomainError: B ≤ 0 或 K < 2
    """
    K = _validate_ratio_terms(K)
    B = Validators.validate_positive("B", params.B)
    A = params.A
    inv_half = 2.0 / params.alpha
    if A == 0.0:
        ratios = tuple(0.0 for _ in range(K))
    else:
        log_scale = math.log(A) - inv_half * math.log(B)
        ratios = tuple(
            _exp_or_inf(log_scale - math.log(k + 1) + log_gamma(inv_half * (k + 2)) - log_gamma(inv_half * (k + 1)))
            for k in range(1, K + 1)
        )
    if params.alpha > 2.0:
        verdict, limit = ConvergenceVerdict.CONVERGES, 0.0
    elif params.alpha == 2.0:
        verdict, limit = ConvergenceVerdict.CONDITIONAL, inv_half ** inv_half * A / B ** inv_half
    else:
        verdict, limit = ConvergenceVerdict.DIVERGES, math.inf
    return ConvergenceReport(series="noise", ratios=ratios, verdict=verdict, limit_expression=limit)


# ========== 统一入口 ==========

def _exact(params: IntegralParams) -> float:
    # A = 0 或 B = 0 对任意 α 成立，优先于 α 判断
    if params.B == 0.0:
        return limit_interference(params.A)
    if params.A == 0.0:
        return limit_noise(params.B, params.alpha)
    if params.alpha == 2.0:
        return exact_alpha2(params.A, params.B)
    if params.alpha == 4.0:
        return exact_alpha4(params.A, params.B)
    raise UnsupportedExactError(
        f"(A={params.A}, B={params.B}, α={params.alpha}) 不存在闭式解，仅 α ∈ {{2, 4}} 或 A·B = 0 时可用"
    )


def evaluate(params: IntegralParams, method: Union[ApproxMethod, str],
             n: int = DEFAULT_TERMS, x_hat_override: Optional[float] = None) -> ApproxResult:
    """按方法分派求值

    Args:
        params (IntegralParams): (A, B, α)
        method (Union[ApproxMethod, str]): 方法枚举或名称（支持 "interference" 等短名称）
        n (int): 级数项数
        x_hat_override (Optional[float]): 拉普拉斯展开点

    Returns:
        ApproxResult: 近似结果；exact 方法的 error_bound 为 0

    Raises:
        UnsupportedExactError: method = exact 但不存在闭式解
        DomainError: 各方法的前提条件不满足

    Example:
        >>> evaluate(IntegralParams(A=1.0, B=0.0, alpha=3.7), "exact").value
        1.0
    """
    if not isinstance(method, ApproxMethod):
        try:
            method = ApproxMethod.from_name(method)
        except ValueError as e:
            raise DomainError(str(e))

    if method is ApproxMethod.EXACT:
        return ApproxResult(value=_exact(params), method=method, error_bound=0.0)
    if method is ApproxMethod.LIMITING:
        return limiting_approx(params)
    if method is ApproxMethod.INTERFERENCE_SERIES:
        return interference_series(params, n)
    if method is ApproxMethod.NOISE_SERIES:
        return noise_series(params, n)
    return laplace_approx(params, x_hat_override)
