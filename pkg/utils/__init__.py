"""
工具模块
包含覆盖概率积分计算所需的各种工具类和函数

模块结构：
- constants: 常量定义（集中管理）
- models: 数据模型定义
- validators: 验证器
- exception_handlers: 异常层次与异常处理装饰器
- specfun: 特殊函数
- quadrature: 数值积分
- coverage_model: 网络参数与覆盖概率
- approximations: 闭式解与近似方法
- file_utils: 文件操作工具
"""

from .models import (
    ApproxMethod, ApproxResult, ConvergenceReport, ConvergenceVerdict, CoverageConfig,
    DerivedParams, ExponentialFading, IntegralParams, LaplaceInternals, NetworkParams,
    QuadratureResult, SweepConfig, ValidityReport,
)
from .exception_handlers import (
    ConvergenceError, CoverageMathError, CoverageRangeError, DegenerateInputError,
    DomainError, SpecfunOverflowError, UnsupportedExactError,
)
from .specfun import (
    erfc, erfcx, gamma, log_gamma, lower_incomplete_gamma, q_function, upper_incomplete_gamma,
)
from .quadrature import integrate_coverage, integrate_interval, integrate_semi_infinite
from .coverage_model import (
    compute_beta, coverage_probability, db_to_linear, derive, sigma2_to_snr_db, snr_db_to_sigma2,
)
from .approximations import (
    evaluate, exact_alpha2, exact_alpha4, interference_series, interference_validity,
    laplace_approx, laplace_error_bound, laplace_internals, limit_interference, limit_noise,
    limiting_approx, noise_series, noise_validity, optimal_truncation_index,
    ratio_test_interference, ratio_test_noise,
)
from .file_utils import load_json_file, save_csv_file
from .validators import Validators, ValidationError

__all__ = [
    # 数据模型
    "ApproxMethod", "ApproxResult", "ConvergenceReport", "ConvergenceVerdict", "CoverageConfig",
    "DerivedParams", "ExponentialFading", "IntegralParams", "LaplaceInternals", "NetworkParams",
    "QuadratureResult", "SweepConfig", "ValidityReport",

    # 异常类
    "ConvergenceError", "CoverageMathError", "CoverageRangeError", "DegenerateInputError",
    "DomainError", "SpecfunOverflowError", "UnsupportedExactError", "ValidationError",

    # 特殊函数
    "erfc", "erfcx", "gamma", "log_gamma", "lower_incomplete_gamma", "q_function",
    "upper_incomplete_gamma",

    # 数值积分
    "integrate_coverage", "integrate_interval", "integrate_semi_infinite",

    # 网络模型
    "compute_beta", "coverage_probability", "db_to_linear", "derive",
    "sigma2_to_snr_db", "snr_db_to_sigma2",

    # 近似方法
    "evaluate", "exact_alpha2", "exact_alpha4", "interference_series", "interference_validity",
    "laplace_approx", "laplace_error_bound", "laplace_internals", "limit_interference",
    "limit_noise", "limiting_approx", "noise_series", "noise_validity",
    "optimal_truncation_index", "ratio_test_interference", "ratio_test_noise",

    # 文件操作工具
    "load_json_file", "save_csv_file",

    # 验证器
    "Validators",
]
