"""
异常定义与异常处理装饰器模块

定义数值计算中使用的异常层次，并提供通用的异常处理装饰器，
用于简化扫描等批量计算中的异常处理逻辑。
"""

import asyncio
import functools
import logging
import math
import traceback
from typing import Any


logger = logging.getLogger(__name__)


class CoverageMathError(Exception):
    """数值计算异常基类

    所有由特殊函数、数值积分、网络模型和近似方法抛出的数学错误
    都继承自此类，命令行据此返回退出码 3。
    """
    pass


class DomainError(CoverageMathError, ValueError):
    """参数超出定义域（极点、非正参数、路损指数超出方法适用范围等）"""
    pass


class DegenerateInputError(DomainError):
    """A = B = 0 时积分发散"""
    pass


class UnsupportedExactError(DomainError):
    """请求精确解但该参数组合不存在闭式解"""
    pass


class SpecfunOverflowError(CoverageMathError, OverflowError):
    """特殊函数结果超出 double 表示范围"""
    pass


class ConvergenceError(CoverageMathError, RuntimeError):
    """级数、连分式或数值积分在预算内未达到容差

    Attributes:
        iterations (int): 已执行的迭代次数或函数求值次数
    """

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(message)
        self.iterations = iterations


class CoverageRangeError(CoverageMathError, ValueError):
    """覆盖概率超出 [0, 1]，说明输入不一致"""
    pass


class ExceptionHandler:
    """异常处理器类

    提供统一的异常日志记录，供装饰器调用。
    """

    logger = logger

    @staticmethod
    def handle_math_error(func_name: str, error: Exception, default_return: Any = None) -> Any:
        """处理数值计算相关异常

        Args:
            func_name: 函数名称
            error: 异常对象
            default_return: 默认返回值

        Returns:
            默认返回值
        """
        ExceptionHandler.logger.debug(f"{func_name} 数值错误: {error}")
        return default_return

    @staticmethod
    def handle_data_error(func_name: str, error: Exception, default_return: Any = None) -> Any:
        """处理参数类型相关异常"""
        ExceptionHandler.logger.error(f"{func_name} 数据格式错误: {error}")
        return default_return


def safe_execute(default_return=None, log_level="error", include_traceback=True):
    """通用异常处理装饰器

    为函数添加异常处理功能。数值异常（CoverageMathError）按 debug 级别记录
    并返回默认值；其他异常按 log_level 记录后同样返回默认值。

    Args:
        default_return: 异常时的默认返回值
        log_level: 日志级别 ("error", "warning", "info")
        include_traceback: 是否包含详细错误堆栈信息

    Returns:
        装饰后的函数

    Example:
        @safe_execute(default_return=math.nan, log_level="warning")
        def laplace_cell(params):
            ...
    """
    def _log_unknown(func_name: str, error: Exception):
        log_message = f"{func_name} 发生未知错误: {error}"
        if include_traceback:
            log_message += f"\n{traceback.format_exc()}"
        getattr(ExceptionHandler.logger, log_level, ExceptionHandler.logger.error)(log_message)

    def decorator(func):
        @functools.wraps(func)
        async def async_wrapper(*args, **kwargs):
            try:
                return await func(*args, **kwargs)
            except CoverageMathError as e:
                return ExceptionHandler.handle_math_error(func.__name__, e, default_return)
            except (TypeError, AttributeError) as e:
                return ExceptionHandler.handle_data_error(func.__name__, e, default_return)
            except ArithmeticError as e:
                _log_unknown(func.__name__, e)
                return default_return

        @functools.wraps(func)
        def sync_wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except CoverageMathError as e:
                return ExceptionHandler.handle_math_error(func.__name__, e, default_return)
            except (TypeError, AttributeError) as e:
                return ExceptionHandler.handle_data_error(func.__name__, e, default_return)
            except ArithmeticError as e:
                _log_unknown(func.__name__, e)
                return default_return

        # 根据函数类型返回相应的包装器
        if asyncio.iscoroutinefunction(func):
            return async_wrapper
        return sync_wrapper

    return decorator


def safe_calculation(default_return=math.nan):
    """计算操作安全装饰器

    专门用于扫描中单个方法单元格的计算：某个方法在该参数下不适用时
    返回 nan，而不是中断整个扫描。

    Args:
        default_return: 异常时的默认返回值，默认为 nan

    Returns:
        装饰后的函数
    """
    return safe_execute(default_return=default_return, log_level="warning")

