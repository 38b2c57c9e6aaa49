"""
工具函数模块

提供有理数解析、格式化、随机有理数采样和日志配置等辅助函数
"""

import logging
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from .errors import NOBodyError

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    解析 "p/q" 或整数形式的有理数

    不接受小数输入，避免静默舍入

    Args:
        text: 有理数字符串

    Returns:
        Fraction: 精确有理数
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise NOBodyError(f"不支持的有理数输入: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_PATTERN.match(str(text))
    if match is None:
        raise NOBodyError(f"无法解析有理数(仅支持 p/q 形式): {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise NOBodyError(f"分母不能为零: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def parse_rational_list(text: str) -> List[Fraction]:
    """
    解析逗号分隔的有理数列表，例如 "1,1,1" 或 "3/2,1"

    Args:
        text: 逗号分隔的字符串

    Returns:
        List[Fraction]: 有理数列表
    """
    parts = [p for p in str(text).split(',') if p.strip()]
    if not parts:
        raise NOBodyError(f"有理数列表为空: {text!r}")
    return [parse_rational(p) for p in parts]


def format_rational(value: Fraction) -> str:
    """
    格式化有理数为 "p/q" 或整数字符串

    Args:
        value: 有理数

    Returns:
        str: 格式化后的字符串
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_vector(vec: Sequence[Fraction]) -> str:
    """格式化有理向量为 (a, b, c)"""
    return "(" + ", ".join(format_rational(v) for v in vec) + ")"


def format_class(vec: Sequence[Fraction], basis: Sequence[str]) -> str:
    """格式化除子类为 "2*E - Rbar" 形式"""
    terms = []
    for c, name in zip(vec, basis):
        c = Fraction(c)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = name if mag == 1 else f"{format_rational(mag)}*{name}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


def rational_to_json(value: Fraction) -> List[str]:
    """有理数序列化为 ["num", "den"] 十进制字符串对"""
    value = Fraction(value)
    return [str(value.numerator), str(value.denominator)]


def rational_from_json(payload) -> Fraction:
    """从 ["num", "den"]、"p/q" 或整数反序列化有理数"""
    if isinstance(payload, (list, tuple)):
        if len(payload) != 2:
            raise NOBodyError(f"有理数JSON格式错误: {payload!r}")
        return Fraction(int(payload[0]), int(payload[1]))
    return parse_rational(payload)


def random_rationals(rng: np.random.Generator,
                     low: Fraction,
                     high: Fraction,
                     count: int,
                     max_denominator: int = 97) -> List[Fraction]:
    """
    在开区间 (low, high) 内采样随机有理数

    Args:
        rng: numpy随机数生成器
        low: 下界
        high: 上界
        count: 采样数量
        max_denominator: 分母上限

    Returns:
        List[Fraction]: 随机有理数列表
    """
    low, high = Fraction(low), Fraction(high)
    if high <= low:
        raise NOBodyError(f"采样区间为空: ({low}, {high})")
    samples = []
    dens = rng.integers(2, max_denominator + 1, size=count)
    nums = rng.integers(1, dens)
    for num, den in zip(nums, dens):
        samples.append(low + (high - low) * Fraction(int(num), int(den)))
    return samples


def random_rational_points(rng: np.random.Generator,
                           vertices: Sequence[Sequence[Fraction]],
                           count: int) -> List[tuple]:
    """
    在顶点凸包内采样随机有理点(随机凸组合)

    Args:
        rng: numpy随机数生成器
        vertices: 顶点列表
        count: 采样数量

    Returns:
        List[tuple]: 有理点列表
    """
    points = []
    n = len(vertices)
    for _ in range(count):
        weights = [Fraction(int(w)) for w in rng.integers(1, 50, size=n)]
        total = sum(weights)
        dim = len(vertices[0])
        points.append(tuple(sum(weights[k] * Fraction(vertices[k][i]) for k in range(n)) / total
                            for i in range(dim)))
    return points


def env_from_pairs(pairs: Iterable) -> Dict[str, Fraction]:
    """把 (名称, 值) 对转换为参数环境"""
    return {str(name): parse_rational(value) for name, value in pairs}


def setup_logging(level: Optional[int] = None) -> None:
    """
    配置日志输出

    Args:
        level: 日志级别，默认WARNING
    """
    logging.basicConfig(
        level=logging.WARNING if level is None else level,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
