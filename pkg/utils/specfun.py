"""
特殊函数模块

自包含的特殊函数内核：
- 伽马函数族：gamma, log_gamma, upper_incomplete_gamma, lower_incomplete_gamma
- 误差函数族：erfc, erfcx, q_function

所有函数都是纯函数，不持有任何全局可变状态，可在任意线程中并发调用。
Γ(x) 在 x > 171.6243769563027 时溢出 double，此时抛出 SpecfunOverflowError。
"""

import logging
import math

from .constants import (
    CF_FPMIN, ERFC_SERIES_CUTOFF, EXP_OVERFLOW_LOG, GAMMA_OVERFLOW_THRESHOLD,
    LANCZOS_COEFFICIENTS, LANCZOS_G, LOG_SQRT_TWO_PI, NEGATIVE_A_CF_CUTOFF,
    SERIES_EPS, SERIES_MAX_ITER, SQRT_PI, SQRT_TWO,
)
from .exception_handlers import ConvergenceError, DomainError, SpecfunOverflowError
from .models import SpecfunResult
from .validators import Validators


logger = logging.getLogger(__name__)

# 整数参数走精确阶乘路径的上限
_EXACT_FACTORIAL_MAX = 171
_EXACT_LOG_FACTORIAL_MAX = 2000


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _require(result: SpecfunResult, name: str) -> float:
    """未收敛时抛出 ConvergenceError，否则返回数值"""
    if not result.converged:
        raise ConvergenceError(f"{name} 在 {result.iterations} 次迭代内未收敛", result.iterations)
    return result.value


def sinpi(x: float) -> float:
    """sin(πx)，先做精确的整数周期约简

    在整数处返回精确的 0，反射公式在负参数附近因此保持相对精度。
    """
    x = float(x)
    k = round(x)
    r = x - k
    if r == 0.0:
        return 0.0
    value = math.sin(math.pi * r)
    return -value if k % 2 else value


def _lanczos_sum(z: float) -> float:
    acc = LANCZOS_COEFFICIENTS[0]
    for i in range(1, len(LANCZOS_COEFFICIENTS)):
        acc += LANCZOS_COEFFICIENTS[i] / (z + i)
    return acc


def _lanczos_gamma(x: float) -> float:
    # x >= 0.5
    z = x - 1.0
    t = z + LANCZOS_G + 0.5
    # t^(z+0.5) 拆成两半相乘，避免 x 接近 171 时中间结果溢出
    half = t ** ((z + 0.5) / 2.0)
    return math.exp(LOG_SQRT_TWO_PI) * _lanczos_sum(z) * half * math.exp(-t) * half


def gamma(x: float) -> float:
    """伽马函数 Γ(x)

    正整数使用精确阶乘；x < 0.5 使用反射公式 Γ(x) = π / (sin(πx)·Γ(1−x))；
    其余使用 Lanczos 近似（g = 7, n = 9），相对误差约 1e-15。

    Args:
        x (float): 参数，不能是非正整数

    Returns:
        float: Γ(x)

    Raises:
        DomainError: x 为非正整数（极点）
        SpecfunOverflowError: x > 171.6243769563027

    Example:
        >>> gamma(5)
        24.0
        >>> gamma(0.5)
        1.7724538509055159
    """
    x = Validators.validate_finite("x", x)
    if _is_nonpositive_integer(x):
        raise DomainError(f"Γ(x) 在非正整数 x = {x} 处无定义")
    if x > GAMMA_OVERFLOW_THRESHOLD:
        raise SpecfunOverflowError(f"Γ({x}) 超出 double 范围（阈值 {GAMMA_OVERFLOW_THRESHOLD}）")
    if x == math.floor(x) and x <= _EXACT_FACTORIAL_MAX:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        reflected = 1.0 - x
        if reflected > GAMMA_OVERFLOW_THRESHOLD:
            # |Γ(x)| 小于最小正规数
            return 0.0
        return math.pi / (sinpi(x) * _lanczos_gamma(reflected))
    return _lanczos_gamma(x)


def log_gamma(x: float) -> float:
    """ln Γ(x)，x > 0

    级数系数 Γ(kα/2 + 1) 在 k 较大时会溢出，近似模块统一用此函数在对数域计算。

    Args:
        x (float): 正实数

    Returns:
        float: ln Γ(x)

    Raises:
        DomainError: x ≤ 0

    Example:
        >>> log_gamma(1)
        0.0
        >>> log_gamma(2)
        0.0
    """
    x = Validators.validate_positive("x", x)
    if x == math.floor(x) and x <= _EXACT_LOG_FACTORIAL_MAX:
        n = int(x)
        if n <= 2:
            return 0.0
        return math.log(math.factorial(n - 1))
    if x < 0.5:
        # 0 < x < 0.5 时 sin(πx) > 0
        return math.log(math.pi / sinpi(x)) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + LANCZOS_G + 0.5
    return LOG_SQRT_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def _lower_gamma_series(a: float, z: float) -> SpecfunResult:
    """Σ z^n / (a(a+1)...(a+n))，γ(a,z) = z^a e^{-z} · 该和"""
    term = 1.0 / a
    total = term
    for n in range(1, SERIES_MAX_ITER + 1):
        term *= z / (a + n)
        total += term
        if abs(term) <= abs(total) * SERIES_EPS:
            return SpecfunResult(total, True, n)
    return SpecfunResult(total, False, SERIES_MAX_ITER)


def _upper_gamma_fraction(a: float, z: float) -> SpecfunResult:
    """Legendre 连分式（修正 Lentz 算法），Γ(a,z) = z^a e^{-z} · 该值

    对任意实数 a 和 z > 0 都成立，z 较大时收敛最快。
    """
    b = z + 1.0 - a
    c = 1.0 / CF_FPMIN
    d = 1.0 / b if abs(b) >= CF_FPMIN else 1.0 / CF_FPMIN
    h = d
    for i in range(1, SERIES_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < CF_FPMIN:
            d = CF_FPMIN
        c = b + an / c
        if abs(c) < CF_FPMIN:
            c = CF_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= SERIES_EPS:
            return SpecfunResult(h, True, i)
    return SpecfunResult(h, False, SERIES_MAX_ITER)


def _log_prefactor(a: float, z: float) -> float:
    # ln(z^a e^{-z})
    return a * math.log(z) - z


def _upper_gamma_positive(a: float, z: float) -> float:
    if z < a + 1.0:
        series = _require(_lower_gamma_series(a, z), "γ(a,z) 级数")
        return gamma(a) - math.exp(_log_prefactor(a, z)) * series
    fraction = _require(_upper_gamma_fraction(a, z), "Γ(a,z) 连分式")
    return math.exp(_log_prefactor(a, z)) * fraction


def upper_incomplete_gamma(a: float, z: float) -> float:
    """上不完全伽马函数 Γ(a, z) = ∫_z^∞ x^{a−1} e^{−x} dx

    a > 0 时 z < a+1 用级数（Γ(a) − γ(a,z)），否则用连分式。
    a 为负非整数时：z ≥ 1.5 直接用连分式；否则先在 a + ⌈−a⌉ ∈ (0, 1) 处求值，
    再用 Γ(a, z) = (Γ(a+1, z) − z^a e^{−z}) / a 逐步向下递推。

    Args:
        a (float): 正实数或负非整数
        z (float): 正实数

    Returns:
        float: Γ(a, z)

    Raises:
        DomainError: z ≤ 0 或 a 为非正整数
        ConvergenceError: 级数或连分式未收敛

    Example:
        >>> upper_incomplete_gamma(1, 2)  # e^{-2}
        0.1353352832366127
    """
    a = Validators.validate_finite("a", a)
    z = Validators.validate_positive("z", z)
    if _is_nonpositive_integer(a):
        raise DomainError(f"Γ(a, z) 要求 a 不是非正整数，收到 a = {a}")
    if a > 0.0:
        return _upper_gamma_positive(a, z)

    if z >= NEGATIVE_A_CF_CUTOFF:
        fraction = _require(_upper_gamma_fraction(a, z), "Γ(a,z) 连分式")
        return math.exp(_log_prefactor(a, z)) * fraction

    steps = math.ceil(-a)
    value = _upper_gamma_positive(a + steps, z)
    exp_neg_z = math.exp(-z)
    for k in range(steps - 1, -1, -1):
        shifted = a + k
        value = (value - z ** shifted * exp_neg_z) / shifted
    logger.debug(f"Γ({a}, {z}) 递推 {steps} 步")
    return value


def lower_incomplete_gamma(a: float, z: float) -> float:
    """下不完全伽马函数 γ(a, z) = ∫_0^z x^{a−1} e^{−x} dx

    Args:
        a (float): 正实数
        z (float): 非负实数

    Returns:
        float: γ(a, z)，z = 0 时为 0

    Raises:
        DomainError: a ≤ 0 或 z < 0

    Example:
        >>> lower_incomplete_gamma(1, 1)  # 1 - e^{-1}
        0.6321205588285577
    """
    a = Validators.validate_positive("a", a)
    z = Validators.validate_nonnegative("z", z)
    if z == 0.0:
        return 0.0
    if z < a + 1.0:
        series = _require(_lower_gamma_series(a, z), "γ(a,z) 级数")
        return math.exp(_log_prefactor(a, z)) * series
    fraction = _require(_upper_gamma_fraction(a, z), "Γ(a,z) 连分式")
    return gamma(a) - math.exp(_log_prefactor(a, z)) * fraction


def _erf_series(x: float) -> SpecfunResult:
    """Σ 2^n x^{2n+1} / (1·3···(2n+1))，erf(x) = (2/√π) e^{−x²} · 该和"""
    term = x
    total = x
    two_x2 = 2.0 * x * x
    for n in range(1, SERIES_MAX_ITER + 1):
        term *= two_x2 / (2 * n + 1)
        total += term
        if term <= total * SERIES_EPS:
            return SpecfunResult(total, True, n)
    return SpecfunResult(total, False, SERIES_MAX_ITER)


def _erfc_fraction(x: float) -> SpecfunResult:
    """x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...)))，erfc(x) = e^{−x²} / (√π · 该值)"""
    f = x
    c = f
    d = 0.0
    for k in range(1, SERIES_MAX_ITER + 1):
        coefficient = 0.5 * k
        d = x + coefficient * d
        if abs(d) < CF_FPMIN:
            d = CF_FPMIN
        c = x + coefficient / c
        if abs(c) < CF_FPMIN:
            c = CF_FPMIN
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) <= SERIES_EPS:
            return SpecfunResult(f, True, k)
    return SpecfunResult(f, False, SERIES_MAX_ITER)


def erfc(x: float) -> float:
    """互补误差函数 erfc(x)

    x < 2.5 用 erf 的正项级数，x ≥ 2.5 用连分式；负参数用 erfc(x) = 2 − erfc(−x)。

    Example:
        >>> erfc(0.0)
        1.0
    """
    x = Validators.validate_finite("x", x)
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x < ERFC_SERIES_CUTOFF:
        series = _require(_erf_series(x), "erf 级数")
        return 1.0 - 2.0 / SQRT_PI * math.exp(-x * x) * series
    if x * x > EXP_OVERFLOW_LOG + 50.0:
        return 0.0
    fraction = _require(_erfc_fraction(x), "erfc 连分式")
    return math.exp(-x * x) / (SQRT_PI * fraction)


def erfcx(x: float) -> float:
    """缩放互补误差函数 erfcx(x) = e^{x²} · erfc(x)

    α = 4 闭式解与拉普拉斯近似用它避免 e^{x²} 溢出、erfc(x) 下溢。

    Raises:
        SpecfunOverflowError: x 为绝对值很大的负数，结果超出 double 范围
    """
    x = Validators.validate_finite("x", x)
    if x < 0.0:
        if x * x > EXP_OVERFLOW_LOG - 1.0:
            raise SpecfunOverflowError(f"erfcx({x}) 超出 double 范围")
        return 2.0 * math.exp(x * x) - erfcx(-x)
    if x < ERFC_SERIES_CUTOFF:
        series = _require(_erf_series(x), "erf 级数")
        return math.exp(x * x) - 2.0 / SQRT_PI * series
    fraction = _require(_erfc_fraction(x), "erfc 连分式")
    return 1.0 / (SQRT_PI * fraction)


def q_function(x: float) -> float:
    """标准正态尾概率 Q(x) = P(N(0,1) > x)

    负参数用 Q(x) = 1 − Q(−x)，因此 Q(x) + Q(−x) 在舍入误差内恒等于 1。

    Args:
        x (float): 任意有限实数

    Returns:
        float: Q(x) ∈ [0, 1]

    Example:
        >>> q_function(0.0)
        0.5
    """
    x = Validators.validate_finite("x", x)
    if x < 0.0:
        return 1.0 - q_function(-x)
    return 0.5 * erfc(x / SQRT_TWO)
