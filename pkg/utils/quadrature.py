"""
数值积分模块

高精度参考积分（oracle），作为所有近似误差测量的真值：
- integrate_interval: 有限区间上的自适应 Gauss-Kronrod (7/15) 积分
- integrate_semi_infinite: 经变量代换 x = s·t/(1−t) 的 (0, ∞) 积分
- integrate_coverage: 覆盖概率积分 I = ∫_0^∞ exp{−(Ax + Bx^{α/2})} dx

被积函数接收并返回 numpy 数组，每次细分只调用一次被积函数。
"""

import heapq
import logging
import math
from typing import Callable, List, Tuple

import numpy as np

from .constants import (
    G7_WEIGHTS, GK15_NODES, GK15_WEIGHTS, QUAD_DEFAULT_TOL, QUAD_INITIAL_PANELS,
    QUAD_MAX_INTERVALS, QUAD_MIN_TOL, QUAD_RELATIVE_FLOOR, QUAD_TRUNCATION_FACTOR,
)
from .exception_handlers import ConvergenceError, DomainError
from .models import IntegralParams, QuadratureResult
from .validators import Validators


logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

_NODES = np.asarray(GK15_NODES)
_KRONROD_WEIGHTS = np.asarray(GK15_WEIGHTS)
_GAUSS_WEIGHTS = np.asarray(G7_WEIGHTS)
# 15 个节点在 [-1, 1] 上的位置：左侧 7 个、中心、右侧 7 个
_ABSCISSAE = np.concatenate([-_NODES[:7], [0.0], _NODES[:7][::-1]])

_BISECTION_STEPS = 200


class _GaussKronrod:
    """对一批区间同时计算 G7 与 K15 结果"""

    def __init__(self, f: Integrand):
        self.f = f
        self.evaluations = 0

    def __call__(self, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        center = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = center[:, None] + half[:, None] * _ABSCISSAE[None, :]
        values = np.asarray(self.f(x.ravel()), dtype=float).reshape(x.shape)
        self.evaluations += values.size
        if not np.all(np.isfinite(values)):
            raise ConvergenceError("被积函数在积分区间内出现非有限值", self.evaluations)

        left = values[:, :7]
        right = values[:, 8:][:, ::-1]
        middle = values[:, 7]
        pairs = left + right
        kronrod = _KRONROD_WEIGHTS[7] * middle + pairs @ _KRONROD_WEIGHTS[:7]
        gauss = _GAUSS_WEIGHTS[3] * middle + pairs[:, 1::2] @ _GAUSS_WEIGHTS[:3]
        return kronrod * half, np.abs(kronrod - gauss) * half


def _validate_tol(tol: float) -> float:
    tol = Validators.validate_positive("tol", tol)
    if tol < QUAD_MIN_TOL:
        raise DomainError(f"容差 tol 不能小于 {QUAD_MIN_TOL}，收到 {tol}")
    return tol


def integrate_interval(f: Integrand, lo: float, hi: float, tol: float = QUAD_DEFAULT_TOL) -> QuadratureResult:
    """有限区间 [lo, hi] 上的自适应积分

    先均匀划分为 8 段，之后反复二分误差估计最大的子区间，直到误差估计之和
    不超过 max(tol, 64·ε·|积分|)。误差估计取 |K15 − G7|。

    Args:
        f (Integrand): 被积函数，接收并返回 numpy 数组
        lo (float): 下限
        hi (float): 上限，需 ≥ lo
        tol (float): 绝对容差

    Returns:
        QuadratureResult: 积分值、误差估计、求值次数与子区间数

    Raises:
        DomainError: 区间或容差非法
        ConvergenceError: 子区间数超过 4000 仍未达到容差，或被积函数出现非有限值

    Example:
        >>> integrate_interval(np.exp, 0.0, 1.0).value
        1.718281828459045
    """
    lo = Validators.validate_finite("lo", lo)
    hi = Validators.validate_finite("hi", hi)
    tol = Validators.validate_positive("tol", tol)
    if hi < lo:
        raise DomainError(f"积分区间非法: [{lo}, {hi}]")
    if hi == lo:
        return QuadratureResult(0.0, 0.0, 0, 0)

    rule = _GaussKronrod(f)
    edges = np.linspace(lo, hi, QUAD_INITIAL_PANELS + 1)
    values, errors = rule(edges[:-1], edges[1:])

    heap: List[Tuple[float, float, float, float]] = []
    for a, b, value, error in zip(edges[:-1], edges[1:], values, errors):
        heapq.heappush(heap, (-float(error), float(a), float(b), float(value)))
    error_sum = float(np.sum(errors))

    while True:
        if error_sum <= tol:
            # 累计误差有舍入漂移，停止前重新精确求和
            error_sum = math.fsum(-item[0] for item in heap)
            total = math.fsum(item[3] for item in heap)
            if error_sum <= max(tol, QUAD_RELATIVE_FLOOR * abs(total)):
                break
        if len(heap) >= QUAD_MAX_INTERVALS:
            total = math.fsum(item[3] for item in heap)
            error_sum = math.fsum(-item[0] for item in heap)
            if error_sum <= max(tol, QUAD_RELATIVE_FLOOR * abs(total)):
                break
            raise ConvergenceError(
                f"自适应积分在 {QUAD_MAX_INTERVALS} 个子区间内未达到容差 {tol}（误差估计 {error_sum:.3e}）",
                rule.evaluations,
            )

        neg_error, a, b, _ = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        halves, half_errors = rule(np.array([a, mid]), np.array([mid, b]))
        heapq.heappush(heap, (-float(half_errors[0]), a, mid, float(halves[0])))
        heapq.heappush(heap, (-float(half_errors[1]), mid, b, float(halves[1])))
        error_sum += neg_error + float(half_errors[0] + half_errors[1])

    total = math.fsum(item[3] for item in heap)
    logger.debug(f"自适应积分完成: [{lo}, {hi}] 子区间 {len(heap)} 个, 求值 {rule.evaluations} 次")
    return QuadratureResult(total, error_sum, rule.evaluations, len(heap))


def integrate_semi_infinite(f: Integrand, tol: float = QUAD_DEFAULT_TOL, scale: float = 1.0) -> QuadratureResult:
    """(0, ∞) 上的积分

    代换 x = scale·t/(1−t) 把积分映射到 t ∈ (0, 1)，再调用 integrate_interval。
    被积函数需最终指数衰减；scale 取被积函数质量所在的典型尺度。

    Args:
        f (Integrand): 被积函数
        tol (float): 绝对容差
        scale (float): 变换尺度，默认为 1

    Returns:
        QuadratureResult: 积分结果

    Example:
        >>> integrate_semi_infinite(lambda x: np.exp(-x)).value
        1.0
    """
    scale = Validators.validate_positive("scale", scale)

    def mapped(t: np.ndarray) -> np.ndarray:
        one_minus = 1.0 - t
        x = scale * t / one_minus
        with np.errstate(over="ignore", under="ignore"):
            return np.asarray(f(x), dtype=float) * (scale / (one_minus * one_minus))

    return integrate_interval(mapped, 0.0, 1.0, tol)


def _truncation_point(p: float, q: float, half_alpha: float, target: float) -> float:
    """解 p·t + q·t^{α/2} = target，左端单调递增"""

    def exponent(t: float) -> float:
        return p * t + q * t ** half_alpha

    lo, hi = 0.0, 1.0
    while exponent(hi) < target:
        lo, hi = hi, hi * 2.0
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if exponent(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return hi


def integrate_coverage(params: IntegralParams, tol: float = QUAD_DEFAULT_TOL) -> QuadratureResult:
    """覆盖概率积分 I = ∫_0^∞ exp{−(Ax + Bx^{α/2})} dx 的参考值

    先按特征长度 s = (A + B^{2/α})^{-1} 缩放 x = s·t，使被积函数变为
    exp{−(p t + q t^{α/2})}，其中 p + q^{2/α} = 1。在 X* 处截断
    （被积函数 < tol·1e-3），[0, X*] 自适应积分，尾部 [X*, ∞) 单独积分并计入。

    Args:
        params (IntegralParams): (A, B, α)
        tol (float): 绝对容差，不小于 1e-13

    Returns:
        QuadratureResult: I 的值与误差估计。tol 低于 64·ε·|I| 时以后者为准

    Raises:
        DomainError: tol < 1e-13
        ConvergenceError: 预算内未达到容差

    Example:
        >>> integrate_coverage(IntegralParams(A=1.0, B=1.0, alpha=2.0)).value
        0.5
    """
    tol = _validate_tol(tol)
    A, B, alpha = params.A, params.B, params.alpha
    half_alpha = params.half_alpha
    s = params.natural_scale
    p = A * s
    q = B * s ** half_alpha

    tol_scaled = max(tol / s, QUAD_RELATIVE_FLOOR)
    target = max(math.log(1.0 / (tol_scaled * QUAD_TRUNCATION_FACTOR)), 1.0)
    x_star = _truncation_point(p, q, half_alpha, target)

    def integrand(t: np.ndarray) -> np.ndarray:
        return np.exp(-(p * t + q * np.power(t, half_alpha)))

    head = integrate_interval(integrand, 0.0, x_star, 0.9 * tol_scaled)
    tail = integrate_semi_infinite(lambda u: integrand(x_star + u), 0.1 * tol_scaled, scale=1.0)

    value = s * (head.value + tail.value)
    error = s * (head.abs_error_estimate + tail.abs_error_estimate)
    logger.debug(f"覆盖积分 A={A}, B={B}, α={alpha}: X*={x_star:.4g}, I={value:.12g}, 误差估计 {error:.3e}")
    return QuadratureResult(
        value=value,
        abs_error_estimate=error,
        evaluations=head.evaluations + tail.evaluations,
        intervals=head.intervals + tail.intervals,
    )
