"""
公式解析器

用 sympy 解析数据文件中的公式字符串，并转换为分段线性表达式
"""

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from utils.errors import DataFileError

from .expr import Affine, AffineForm, PwlExpr, const, make_max, make_min, make_pos, make_scale, make_sum, var

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _pos(x):
    return sympy.Max(x, 0)


def symbol(name: str) -> sympy.Symbol:
    """统一使用实数符号，保证 Min/Max 可比较"""
    return sympy.Symbol(name, real=True)


def sympify_formula(text: str, extra_functions: Optional[Mapping] = None) -> sympy.Expr:
    """
    安全解析公式字符串，所有标识符都作为实数符号

    不接受小数，避免浮点进入计算

    Args:
        text: 公式，例如 "min(1 - s, e)"、"pos(t - a)"、"4*theta - 6*E"
        extra_functions: 额外允许的函数

    Returns:
        sympy.Expr: sympy 表达式
    """
    text = str(text)
    if re.search(r"\d\.\d|\.\d|\d\.", text):
        raise DataFileError(f"公式中不允许出现小数: {text!r}")
    local: Dict[str, object] = {"min": sympy.Min, "max": sympy.Max, "pos": _pos}
    if extra_functions:
        local.update(extra_functions)
    for name in _IDENTIFIER.findall(text):
        if name not in local:
            local[name] = symbol(name)
    global_dict = {"Integer": sympy.Integer, "Rational": sympy.Rational, "Symbol": sympy.Symbol}
    try:
        return parse_expr(text, local_dict=local, global_dict=global_dict,
                          transformations=standard_transformations, evaluate=True)
    except (SyntaxError, TypeError, NameError) as e:
        raise DataFileError(f"公式解析失败: {text!r}: {str(e)}")


def to_fraction(value) -> Fraction:
    """sympy 有理数转换为 Fraction"""
    if not isinstance(value, sympy.Rational):
        raise DataFileError(f"不是有理数: {value}")
    return Fraction(int(value.p), int(value.q))


def from_sympy(node) -> PwlExpr:
    """
    sympy 表达式转换为分段线性表达式

    Args:
        node: 只含加法、数乘、Min、Max 的 sympy 表达式

    Returns:
        PwlExpr: 表达式树
    """
    if node.is_Rational:
        return const(Fraction(int(node.p), int(node.q)))
    if node.is_Symbol:
        return var(node.name)
    if isinstance(node, sympy.Add):
        return make_sum([from_sympy(arg) for arg in node.args])
    if isinstance(node, sympy.Mul):
        coeff, rest = node.as_coeff_Mul()
        if not coeff.is_Rational:
            raise DataFileError(f"系数不是有理数: {node}")
        if isinstance(rest, sympy.Mul):
            raise DataFileError(f"不是分段线性表达式(含乘积): {node}")
        return make_scale(Fraction(int(coeff.p), int(coeff.q)), from_sympy(rest))
    if isinstance(node, sympy.Min):
        return make_min([from_sympy(arg) for arg in node.args])
    if isinstance(node, sympy.Max):
        args = list(node.args)
        zeros = [a for a in args if a.is_zero]
        others = [a for a in args if not a.is_zero]
        if zeros and len(others) == 1:
            return make_pos(from_sympy(others[0]))
        return make_max([from_sympy(arg) for arg in args])
    raise DataFileError(f"不是分段线性表达式: {node}")


def parse_pwl(text: str) -> PwlExpr:
    """
    解析分段线性公式

    Args:
        text: 例如 "min(1 - s, 1 + s/2 - t)"

    Returns:
        PwlExpr: 表达式树
    """
    return from_sympy(sympify_formula(text))


def parse_affine(text: str) -> AffineForm:
    """解析仿射公式，含 min/max 时报错"""
    expr = parse_pwl(text)
    if not isinstance(expr, Affine):
        raise DataFileError(f"公式不是仿射的: {text!r}")
    return expr.form


def free_symbols(text: str) -> Iterable[str]:
    return sorted(s.name for s in sympify_formula(text).free_symbols)


def linear_coefficients(text: str,
                        basis: Sequence[str],
                        named: Optional[Mapping[str, str]] = None,
                        definitions: Optional[Mapping[str, str]] = None) -> List[PwlExpr]:
    """
    解析除子类表达式，返回在基下的系数

    系数可以是参数的分段线性函数，例如 "min(d1, tau)*fb1 + tau*E"

    Args:
        text: 类表达式
        basis: 基元素名
        named: 具名类(以基表示)，例如 {"fb1": "f1 - E"}
        definitions: 参数缩写，例如 {"tau": "d1 + d2 - t"}

    Returns:
        List[PwlExpr]: 各基元素的系数
    """
    expr = sympify_formula(text)
    for name, value in (named or {}).items():
        expr = expr.subs(symbol(name), sympify_formula(value))
    for name, value in reversed(list((definitions or {}).items())):
        expr = expr.subs(symbol(name), sympify_formula(value))
    expr = sympy.expand(expr)
    coeffs = []
    remainder = expr
    for name in basis:
        s = symbol(name)
        c = expr.coeff(s)
        if c.has(*[symbol(b) for b in basis]):
            raise DataFileError(f"类表达式不是线性的: {text!r}")
        coeffs.append(c)
        remainder = remainder - c * s
    if sympy.expand(remainder) != 0:
        raise DataFileError(f"类表达式含有基以外的项: {text!r} (剩余 {sympy.expand(remainder)})")
    return [from_sympy(c) for c in coeffs]
