"""
数据验证模块
负责验证数值参数和命令行输入格式
"""

import logging
import math
from typing import Any, List, Sequence

from .constants import ALPHA_MIN, ALPHA_MAX, N_MAX, SWEEP_METHODS
from .exception_handlers import DomainError, DegenerateInputError


logger = logging.getLogger(__name__)


class ValidationError(Exception):
    """验证异常

    当命令行输入格式不正确时抛出的自定义异常（退出码 2）。
    数值前提条件不满足时抛出的是 DomainError（退出码 3）。

    Example:
        >>> try:
        ...     Validators.parse_methods("laplace,foo")
        ... except ValidationError as e:
        ...     print(f"验证失败: {e}")
    """
    pass


class Validators:
    """数据验证器集合

    提供数值参数的前提条件检查与命令行字符串解析。
    所有方法都是静态方法，可以直接通过类名调用。

    Example:
        >>> Validators.validate_positive("A", 1.0)
        1.0
        >>> Validators.validate_alpha(3.0)
        3.0
    """

    @staticmethod
    def validate_finite(name: str, value: Any) -> float:
        """验证参数为有限实数

        Args:
            name (str): 参数名称，用于错误信息
            value (Any): 待验证的值

        Returns:
            float: 转换后的浮点数

        Raises:
            DomainError: 当值不是有限实数时抛出
        """
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise DomainError(f"{name} 必须是实数，收到 {value!r}")
        if not math.isfinite(number):
            raise DomainError(f"{name} 必须是有限值，收到 {number}")
        return number

    @staticmethod
    def validate_positive(name: str, value: Any) -> float:
        """验证参数严格为正

        Raises:
            DomainError: 当值 ≤ 0 时抛出
        """
        number = Validators.validate_finite(name, value)
        if number <= 0.0:
            raise DomainError(f"{name} 必须大于 0，收到 {number}")
        return number

    @staticmethod
    def validate_nonnegative(name: str, value: Any) -> float:
        """验证参数非负

        Raises:
            DomainError: 当值 < 0 时抛出
        """
        number = Validators.validate_finite(name, value)
        if number < 0.0:
            raise DomainError(f"{name} 必须非负，收到 {number}")
        return number

    @staticmethod
    def validate_alpha(alpha: Any) -> float:
        """验证路损指数

        路损指数在实际环境中取值范围为 1.6 到 6.5。

        Args:
            alpha (Any): 路损指数

        Returns:
            float: 验证通过的路损指数

        Raises:
            DomainError: 当 alpha 超出 [1.6, 6.5] 时抛出

        Example:
            >>> Validators.validate_alpha(3.7)
            3.7
            >>> Validators.validate_alpha(7.0)  # 抛出异常
        """
        number = Validators.validate_finite("alpha", alpha)
        if number < ALPHA_MIN or number > ALPHA_MAX:
            raise DomainError(f"alpha 必须在 [{ALPHA_MIN}, {ALPHA_MAX}] 之间，收到 {number}")
        return number

    @staticmethod
    def validate_integral_params(A: Any, B: Any, alpha: Any) -> tuple:
        """验证被积函数参数 (A, B, α)

        Returns:
            tuple: (A, B, alpha) 浮点数三元组

        Raises:
            DomainError: A 或 B 为负，或 alpha 超出范围
            DegenerateInputError: A = B = 0（积分发散）
        """
        A = Validators.validate_nonnegative("A", A)
        B = Validators.validate_nonnegative("B", B)
        alpha = Validators.validate_alpha(alpha)
        if A == 0.0 and B == 0.0:
            raise DegenerateInputError("A 与 B 不能同时为 0，积分发散")
        return A, B, alpha

    @staticmethod
    def validate_terms(n: Any, n_max: int = N_MAX) -> int:
        """验证级数项数 n

        Raises:
            DomainError: 当 n 不是 [0, n_max] 内的整数时抛出
        """
        if isinstance(n, bool) or not isinstance(n, int):
            raise DomainError(f"项数 n 必须是整数，收到 {n!r}")
        if n < 0 or n > n_max:
            raise DomainError(f"项数 n 必须在 0-{n_max} 之间，收到 {n}")
        return n

    @staticmethod
    def parse_methods(text: str, allowed: Sequence[str] = SWEEP_METHODS) -> List[str]:
        """解析逗号分隔的方法列表

        Args:
            text (str): 例如 "limiting,laplace"
            allowed (Sequence[str]): 允许的方法名

        Returns:
            List[str]: 去重并按固定顺序排列的方法名列表

        Raises:
            ValidationError: 为空或包含未知方法名时抛出

        Example:
            >>> Validators.parse_methods("laplace, limiting")
            ['limiting', 'laplace']
        """
        names = [item.strip().lower() for item in str(text).split(",") if item.strip()]
        if not names:
            raise ValidationError("方法列表不能为空")
        unknown = [name for name in names if name not in allowed]
        if unknown:
            raise ValidationError(f"未知的方法: {', '.join(unknown)}，可选: {', '.join(allowed)}")
        return [name for name in allowed if name in names]

    @staticmethod
    def parse_float_list(text: str, name: str = "列表") -> List[float]:
        """解析逗号分隔的浮点数列表

        Raises:
            ValidationError: 为空或包含无法解析的项时抛出
        """
        items = [item.strip() for item in str(text).split(",") if item.strip()]
        if not items:
            raise ValidationError(f"{name}不能为空")
        values = []
        for item in items:
            try:
                values.append(float(item))
            except ValueError:
                raise ValidationError(f"{name}中包含无效数字: {item}")
        return values
