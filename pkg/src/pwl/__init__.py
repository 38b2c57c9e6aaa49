"""
分段线性表达式模块

min / max / 正部 表达式树的精确求值、分支胞腔枚举、公式解析与系数账本
"""

from .branches import BranchCell, breakpoints, branches, certify, concave_pieces, merged_branches
from .expr import (
    Affine,
    AffineForm,
    Max,
    Min,
    Pos,
    PwlExpr,
    Scale,
    Sum,
    as_expr,
    const,
    evaluate,
    expr_from_dict,
    expr_to_dict,
    make_max,
    make_min,
    make_pos,
    make_scale,
    make_sum,
    var,
)
from .ledger import Ledger, LedgerEntry
from .parser import free_symbols, linear_coefficients, parse_affine, parse_pwl, sympify_formula, symbol, to_fraction

eval_expr = evaluate

__all__ = [
    'AffineForm', 'PwlExpr', 'Affine', 'Min', 'Max', 'Pos', 'Sum', 'Scale',
    'as_expr', 'const', 'var', 'make_min', 'make_max', 'make_pos', 'make_sum', 'make_scale',
    'evaluate', 'eval_expr', 'expr_to_dict', 'expr_from_dict',
    'BranchCell', 'branches', 'merged_branches', 'breakpoints',
    'concave_pieces', 'certify',
    'Ledger', 'LedgerEntry',
    'parse_pwl', 'parse_affine', 'linear_coefficients', 'sympify_formula', 'symbol', 'to_fraction', 'free_symbols',
]
