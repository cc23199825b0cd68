"""
报告模板模块
包含 eval、validity、convergence 命令输出的文本模板
"""

import logging
from typing import Any, Dict

from jinja2 import Environment, StrictUndefined

from utils.file_utils import format_number

# 设置日志记录器
logger = logging.getLogger(__name__)

EVAL_TEMPLATE = """\
参数: A = {{ A | num }}, B = {{ B | num }}, α = {{ alpha | num }}
{% if beta is not none %}
网络: β = {{ beta | num }}, 最大覆盖概率 1/β = {{ (1.0 / beta) | num }}
{% endif %}
参考积分: I = {{ oracle.value | num }} (误差估计 {{ oracle.abs_error_estimate | num(3) }}, 求值 {{ oracle.evaluations }} 次)
{% if pc_oracle is not none %}
参考覆盖概率: p_c = {{ pc_oracle | num }}
{% endif %}
{% for row in rows %}
[{{ row.method }}]
{% if row.error %}
  不可用: {{ row.error }}
{% else %}
  I = {{ row.value | num }}
  余项上界: {{ row.error_bound | num if row.error_bound is not none else "无" }}
  绝对误差: {{ row.abs_error | num }}
{% if row.terms_used is not none %}
  项数: {{ row.terms_used }}{% if row.requested_terms != row.terms_used %}（请求 {{ row.requested_terms }}，截断于最优截断点）{% endif %}

{% endif %}
{% if row.pc is not none %}
  p_c = {{ row.pc | num }}
{% endif %}
{% endif %}
{% endfor %}
"""

VALIDITY_TEMPLATE = """\
有效区域 (ε = {{ epsilon | num }}, n = {{ n }}, α = {{ alpha | num }}, β = {{ beta | num }})
{% for report in reports %}
[{{ report.regime }}]
  B 阈值: {{ report.B_threshold | num }}
  σ² 阈值: {{ report.sigma2_threshold | num }} (SNR {{ report.snr_threshold | num(6) }} dB)
  n→∞ 渐近值: {{ report.sigma2_asymptotic | num }} (SNR {{ report.snr_asymptotic | num(6) }} dB)
{% endfor %}
"""

CONVERGENCE_TEMPLATE = """\
比值判别 (A = {{ A | num }}, B = {{ B | num }}, α = {{ alpha | num }}, K = {{ K }})
{% for report in reports %}
[{{ report.series }}] 结论: {{ report.verdict.value }}, 比值极限: {{ report.limit_expression | num }}
  前 {{ report.head | length }} 项比值: {{ report.head | map("num", 6) | join(", ") }}
  后 {{ report.tail | length }} 项比值: {{ report.tail | map("num", 6) | join(", ") }}
{% if report.optimal_truncation is not none %}
  最优截断项数: {{ report.optimal_truncation }}
{% endif %}
{% endfor %}
"""


def _create_environment() -> Environment:
    env = Environment(
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
        undefined=StrictUndefined,
    )
    env.filters["num"] = format_number
    return env


_ENVIRONMENT = _create_environment()
_TEMPLATES = {
    "eval": _ENVIRONMENT.from_string(EVAL_TEMPLATE),
    "validity": _ENVIRONMENT.from_string(VALIDITY_TEMPLATE),
    "convergence": _ENVIRONMENT.from_string(CONVERGENCE_TEMPLATE),
}


def render_report(name: str, context: Dict[str, Any]) -> str:
    """渲染指定名称的报告模板

    Args:
        name (str): "eval"、"validity" 或 "convergence"
        context (Dict[str, Any]): 模板变量

    Returns:
        str: 渲染后的文本

    Raises:
        KeyError: 模板名称不存在
    """
    template = _TEMPLATES[name]
    logger.debug(f"渲染报告模板: {name}")
    return template.render(**context)
