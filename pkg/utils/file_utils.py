"""
文件操作工具模块
提供异步 JSON 配置读取与 CSV 结果写入功能
"""

import asyncio
import csv
import io
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

import aiofiles
import aiofiles.os
import orjson

from .constants import CSV_SIGNIFICANT_DIGITS


# 文件操作常量
ENCODING_UTF8 = 'utf-8'
LINE_TERMINATOR = '\n'


async def load_json_file(file_path: str) -> Dict[str, Any]:
    """异步加载 JSON 文件

    Args:
        file_path (str): JSON 文件路径

    Returns:
        Dict[str, Any]: 解析后的 JSON 数据

    Raises:
        FileNotFoundError: 当文件不存在时抛出
        ValueError: 当文件内容不是有效 JSON 时抛出
        IOError: 当文件读取失败时抛出
    """
    try:
        async with aiofiles.open(file_path, 'rb') as f:
            content = await f.read()
        return await asyncio.to_thread(orjson.loads, content)
    except FileNotFoundError:
        raise FileNotFoundError(f"文件不存在: {file_path}")
    except orjson.JSONDecodeError as e:
        raise ValueError(f"文件内容不是有效JSON: {file_path}, 错误: {e}")


def format_number(value: Optional[float], digits: int = CSV_SIGNIFICANT_DIGITS) -> str:
    """按有效数字格式化数值，None 与 nan 输出为 nan

    Example:
        >>> format_number(1.0 / 3.0)
        '0.333333333333'
    """
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'nan'
    return format(float(value), f'.{digits}g')


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """把表头和数值行渲染为 CSV 文本（LF 换行，数值按 12 位有效数字）"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator=LINE_TERMINATOR)
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(cell) for cell in row])
    return buffer.getvalue()


async def save_csv_file(file_path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """异步保存 CSV 文件，自动创建目录

    Raises:
        OSError: 写入失败时抛出
    """
    parent = Path(file_path).parent
    if str(parent) not in ('', '.'):
        await aiofiles.os.makedirs(parent, exist_ok=True)

    content = render_csv(header, rows)
    async with aiofiles.open(file_path, 'w', encoding=ENCODING_UTF8, newline=LINE_TERMINATOR) as f:
        await f.write(content)
