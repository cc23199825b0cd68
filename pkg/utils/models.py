"""
数据模型定义
定义覆盖概率积分计算中使用的所有数据结构

此模块仅包含数据模型的定义与参数校验，不包含数值算法：
- specfun: 特殊函数
- quadrature: 数值积分
- coverage_model: 网络参数到 (A, B) 的映射
- approximations: 四种近似方法
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Protocol, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .constants import (
    ALPHA_MIN, ALPHA_MAX, BETA_TOL, DEFAULT_ALPHAS, DEFAULT_CELL_RADIUS,
    DEFAULT_EPSILON, DEFAULT_MU, DEFAULT_RATIO_TERMS, DEFAULT_SNR_START,
    DEFAULT_SNR_STEP, DEFAULT_SNR_STOP, DEFAULT_T_DB, DEFAULT_TERMS, N_MAX,
    QUAD_DEFAULT_TOL, SWEEP_METHODS,
)
from .validators import Validators


class ApproxMethod(Enum):
    """近似方法枚举

    Attributes:
        EXACT (str): 闭式精确解（α=2、α=4 或 A·B=0）
        LIMITING (str): 极限近似
        INTERFERENCE_SERIES (str): 干扰受限级数（展开 exp(-Bx^{α/2})）
        NOISE_SERIES (str): 噪声受限级数（展开 exp(-Ax)）
        LAPLACE (str): 拉普拉斯近似

    Example:
        >>> ApproxMethod.from_name("interference")
        <ApproxMethod.INTERFERENCE_SERIES: 'interference_series'>
    """
    EXACT = "exact"
    LIMITING = "limiting"
    INTERFERENCE_SERIES = "interference_series"
    NOISE_SERIES = "noise_series"
    LAPLACE = "laplace"

    @property
    def short_name(self) -> str:
        """命令行与 CSV 列名中使用的短名称"""
        return self.value.replace("_series", "")

    @classmethod
    def from_name(cls, name: str) -> "ApproxMethod":
        """从完整名称或短名称解析方法

        Raises:
            ValueError: 未知名称
        """
        key = str(name).strip().lower()
        for method in cls:
            if key in (method.value, method.short_name):
                return method
        raise ValueError(f"未知的近似方法: {name}")


class ConvergenceVerdict(Enum):
    """比值判别法结论"""
    CONVERGES = "converges"
    DIVERGES = "diverges"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class SpecfunResult:
    """级数/连分式内部求值结果

    Attributes:
        value (float): 求值结果
        converged (bool): 是否在迭代上限内达到容差
        iterations (int): 实际迭代次数
    """
    value: float
    converged: bool
    iterations: int = 0


@dataclass(frozen=True)
class IntegralParams:
    """被积函数 exp{-(Ax + Bx^{α/2})} 的参数

    Attributes:
        A (float): 干扰项系数，A = πλβ，非负
        B (float): 噪声项系数，B = μTσ²，非负
        alpha (float): 路损指数，取值 [1.6, 6.5]

    Example:
        >>> params = IntegralParams(A=1.0, B=0.5, alpha=3.0)
        >>> params.half_alpha
        1.5
    """
    A: float
    B: float
    alpha: float

    def __post_init__(self):
        A, B, alpha = Validators.validate_integral_params(self.A, self.B, self.alpha)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "alpha", alpha)

    @property
    def half_alpha(self) -> float:
        return self.alpha / 2.0

    @property
    def natural_scale(self) -> float:
        """积分的特征长度 (A + B^{2/α})^{-1}"""
        return 1.0 / (self.A + self.B ** (2.0 / self.alpha))


class FadingDistribution(Protocol):
    """干扰信道增益 g 的分布

    实现者需为不可变、可哈希的值对象，以便 β 缓存按值命中。
    """

    def pdf(self, g: np.ndarray) -> np.ndarray:
        """(0, ∞) 上的概率密度"""
        ...

    def moment(self, s: float) -> Optional[float]:
        """E[g^s] 的闭式值，没有闭式时返回 None"""
        ...

    @property
    def scale(self) -> float:
        """分布的典型尺度，用于半无穷积分的变量代换"""
        ...


@dataclass(frozen=True)
class ExponentialFading:
    """指数分布信道增益（瑞利衰落功率）

    Attributes:
        mean (float): 均值，网络模型中为 1/μ

    Example:
        >>> fading = ExponentialFading(mean=1.0)
        >>> fading.moment(0.5)  # Γ(1.5)
        0.886226925452758
    """
    mean: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mean", Validators.validate_positive("fading.mean", self.mean))

    def pdf(self, g: np.ndarray) -> np.ndarray:
        return np.exp(-g / self.mean) / self.mean

    def moment(self, s: float) -> Optional[float]:
        # E[g^s] = Γ(1+s)·mean^s
        from .specfun import gamma
        return gamma(1.0 + s) * self.mean ** s

    @property
    def scale(self) -> float:
        return self.mean


@dataclass(frozen=True)
class NetworkParams:
    """物理网络参数

    Attributes:
        lam (float): 基站 PPP 密度 λ（m⁻²）
        T (float): SINR 门限（线性值）
        mu (float): 发射功率的倒数 μ
        sigma2 (float): 归一化噪声方差 σ²
        alpha (float): 路损指数
        fading (Optional[FadingDistribution]): 干扰信道分布，缺省为均值 1/μ 的指数分布

    Example:
        >>> net = NetworkParams(lam=1e-6, T=1.0, mu=1.0, sigma2=0.01, alpha=3.0)
        >>> net.resolved_fading()
        ExponentialFading(mean=1.0)
    """
    lam: float
    T: float
    mu: float
    sigma2: float
    alpha: float
    fading: Optional[FadingDistribution] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", Validators.validate_positive("lambda", self.lam))
        object.__setattr__(self, "T", Validators.validate_positive("T", self.T))
        object.__setattr__(self, "mu", Validators.validate_positive("mu", self.mu))
        object.__setattr__(self, "sigma2", Validators.validate_nonnegative("sigma2", self.sigma2))
        object.__setattr__(self, "alpha", Validators.validate_alpha(self.alpha))

    def resolved_fading(self) -> FadingDistribution:
        """返回实际使用的衰落分布"""
        if self.fading is None:
            return ExponentialFading(mean=1.0 / self.mu)
        return self.fading


@dataclass(frozen=True)
class DerivedParams:
    """由网络参数导出的量

    Attributes:
        beta (float): β，1/β 为最大覆盖概率
        A (float): πλβ
        B (float): μTσ²
    """
    beta: float
    A: float
    B: float


@dataclass(frozen=True)
class QuadratureResult:
    """数值积分结果

    Attributes:
        value (float): 积分值
        abs_error_estimate (float): 绝对误差估计
        evaluations (int): 被积函数求值次数
        intervals (int): 最终子区间数
    """
    value: float
    abs_error_estimate: float
    evaluations: int
    intervals: int = 0


@dataclass(frozen=True)
class ApproxResult:
    """近似结果

    Attributes:
        value (float): I 的近似值
        method (ApproxMethod): 使用的方法
        error_bound (Optional[float]): 严格的余项上界 |I_R|，无上界时为 None，溢出时为 inf
        terms_used (Optional[int]): 级数实际使用的项数 n
        requested_terms (Optional[int]): 调用方请求的 n（被最优截断限制时与 terms_used 不同）
    """
    value: float
    method: ApproxMethod
    error_bound: Optional[float] = None
    terms_used: Optional[int] = None
    requested_terms: Optional[int] = None

    @property
    def was_capped(self) -> bool:
        return (self.requested_terms is not None and self.terms_used is not None
                and self.terms_used < self.requested_terms)


@dataclass(frozen=True)
class ValidityReport:
    """有效区域阈值

    Attributes:
        regime (str): "interference" 或 "noise"
        epsilon (float): 误差容限 ε
        n (int): 级数项数
        B_threshold (float): B 的阈值
        sigma2_threshold (float): σ² 的阈值
        sigma2_asymptotic (float): n→∞ 时的 σ² 极限值
    """
    regime: str
    epsilon: float
    n: int
    B_threshold: float
    sigma2_threshold: float
    sigma2_asymptotic: float


@dataclass(frozen=True)
class ConvergenceReport:
    """比值判别法诊断结果

    Attributes:
        series (str): "interference" 或 "noise"
        ratios (Tuple[float, ...]): k = 1..K 的 |a_{k+1}/a_k|
        verdict (ConvergenceVerdict): 结论
        limit_expression (float): 比值极限，可能为 inf
        optimal_truncation (Optional[int]): 使余项上界最小的 n（仅干扰级数）
    """
    series: str
    ratios: Tuple[float, ...]
    verdict: ConvergenceVerdict
    limit_expression: float
    optimal_truncation: Optional[int] = None

    @property
    def converges(self) -> bool:
        """级数是否收敛（条件情形按极限 < 1 判断）"""
        if self.verdict is ConvergenceVerdict.CONDITIONAL:
            return self.limit_expression < 1.0
        return self.verdict is ConvergenceVerdict.CONVERGES


@dataclass(frozen=True)
class LaplaceInternals:
    """拉普拉斯近似的中间量

    Attributes:
        x_hat (float): 展开点 x̂
        a (float): h''(x̂)/2
        b (float): h'(x̂)
        c (float): h(x̂)
        y_hat (float): √(2a)(-x̂ + b/2a)
    """
    x_hat: float
    a: float
    b: float
    c: float
    y_hat: float


class SweepConfig(BaseModel):
    """SNR 扫描配置"""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., title="路损指数", description="路损指数 α", examples=[3.0])
    lam: float = Field(..., gt=0, title="基站密度", description="PPP 密度 λ")
    T_db: float = Field(DEFAULT_T_DB, title="SINR 门限", description="SINR 门限（dB）")
    mu: float = Field(DEFAULT_MU, gt=0, title="功率倒数", description="发射功率的倒数 μ")
    snr_db_start: float = Field(DEFAULT_SNR_START, title="起始 SNR", description="起始 SNR（dB，含）")
    snr_db_stop: float = Field(DEFAULT_SNR_STOP, title="终止 SNR", description="终止 SNR（dB，含）")
    snr_db_step: float = Field(DEFAULT_SNR_STEP, gt=0, title="SNR 步长", description="SNR 步长（dB）")
    n_terms: int = Field(DEFAULT_TERMS, ge=0, le=N_MAX, title="级数项数", description="级数项数 n")
    epsilon: float = Field(DEFAULT_EPSILON, gt=0, title="误差容限", description="有效区域误差容限 ε")
    methods: Tuple[str, ...] = Field(SWEEP_METHODS, title="方法", description="参与比较的近似方法")
    output_path: Optional[str] = Field(None, title="输出路径", description="CSV 输出文件")
    tol: float = Field(QUAD_DEFAULT_TOL, gt=0, title="积分容差", description="参考积分的绝对容差")
    x_hat: Optional[float] = Field(None, gt=0, title="展开点", description="拉普拉斯展开点 x̂ 覆盖值")
    beta: Optional[float] = Field(None, gt=0, title="β", description="用户给定的 β（α=2 时必需）")

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, value: float) -> float:
        if value < ALPHA_MIN or value > ALPHA_MAX:
            raise ValueError(f"alpha 必须在 [{ALPHA_MIN}, {ALPHA_MAX}] 之间")
        return value

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if not value:
            raise ValueError("方法列表不能为空")
        unknown = [name for name in value if name not in SWEEP_METHODS]
        if unknown:
            raise ValueError(f"未知的方法: {', '.join(unknown)}")
        return tuple(name for name in SWEEP_METHODS if name in value)

    @model_validator(mode="after")
    def _check_range(self) -> "SweepConfig":
        if self.snr_db_start > self.snr_db_stop:
            raise ValueError("snr_db_start 不能大于 snr_db_stop")
        return self

    @property
    def T(self) -> float:
        """线性 SINR 门限"""
        return 10.0 ** (self.T_db / 10.0)

    def snr_grid(self) -> List[float]:
        """含两端点的 SNR 网格（dB）"""
        count = int(math.floor((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9)) + 1
        return [round(self.snr_db_start + i * self.snr_db_step, 10) for i in range(count)]


class CoverageConfig:
    """命令行默认配置

    从 _conf_schema.json 读取各参数的默认值，缺失项用常量补齐。

    Attributes:
        cell_radius (float): 单基站平均覆盖半径（米），λ = 1/(π·r²)
        T_db (float): SINR 门限（dB）
        mu (float): 发射功率的倒数
        snr_db_start / snr_db_stop / snr_db_step (float): 扫描网格
        n_terms (int): 级数项数
        epsilon (float): 误差容限
        methods (List[str]): 扫描方法
        tol (float): 参考积分容差
        alphas (List[float]): max-error 命令的路损指数列表
        ratio_terms (int): 比值判别法计算的项数 K
        detailed_logging_enabled (bool): 是否输出 DEBUG 日志

    Example:
        >>> config = CoverageConfig.from_dict({"T_db": {"default": 10}})
        >>> config.T_db
        10.0
    """

    def __init__(self):
        self.cell_radius = DEFAULT_CELL_RADIUS
        self.T_db = DEFAULT_T_DB
        self.mu = DEFAULT_MU
        self.snr_db_start = DEFAULT_SNR_START
        self.snr_db_stop = DEFAULT_SNR_STOP
        self.snr_db_step = DEFAULT_SNR_STEP
        self.n_terms = DEFAULT_TERMS
        self.epsilon = DEFAULT_EPSILON
        self.methods = list(SWEEP_METHODS)
        self.tol = QUAD_DEFAULT_TOL
        self.beta_tol = BETA_TOL
        self.alphas = list(DEFAULT_ALPHAS)
        self.ratio_terms = DEFAULT_RATIO_TERMS
        self.detailed_logging_enabled = False

    @property
    def lam(self) -> float:
        return 1.0 / (math.pi * self.cell_radius ** 2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cell_radius": self.cell_radius,
            "T_db": self.T_db,
            "mu": self.mu,
            "snr_db_start": self.snr_db_start,
            "snr_db_stop": self.snr_db_stop,
            "snr_db_step": self.snr_db_step,
            "n_terms": self.n_terms,
            "epsilon": self.epsilon,
            "methods": list(self.methods),
            "tol": self.tol,
            "beta_tol": self.beta_tol,
            "alphas": list(self.alphas),
            "ratio_terms": self.ratio_terms,
            "detailed_logging_enabled": self.detailed_logging_enabled,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CoverageConfig":
        """从配置模式字典创建

        每个键既可以是 {"default": 值, ...} 形式的模式条目，也可以直接是值。

        Args:
            data (Dict[str, Any]): _conf_schema.json 的内容

        Returns:
            CoverageConfig: 对应的配置实例
        """
        config = cls()

        def pick(key: str, current):
            entry = data.get(key, current)
            if isinstance(entry, dict):
                entry = entry.get("default", current)
            return current if entry is None else entry

        config.cell_radius = float(pick("cell_radius", config.cell_radius))
        config.T_db = float(pick("T_db", config.T_db))
        config.mu = float(pick("mu", config.mu))
        config.snr_db_start = float(pick("snr_db_start", config.snr_db_start))
        config.snr_db_stop = float(pick("snr_db_stop", config.snr_db_stop))
        config.snr_db_step = float(pick("snr_db_step", config.snr_db_step))
        config.n_terms = int(pick("n_terms", config.n_terms))
        config.epsilon = float(pick("epsilon", config.epsilon))
        config.methods = list(pick("methods", config.methods))
        config.tol = float(pick("tol", config.tol))
        config.beta_tol = float(pick("beta_tol", config.beta_tol))
        config.alphas = [float(value) for value in pick("alphas", config.alphas)]
        config.ratio_terms = int(pick("ratio_terms", config.ratio_terms))
        config.detailed_logging_enabled = bool(pick("detailed_logging_enabled", config.detailed_logging_enabled))
        return config
