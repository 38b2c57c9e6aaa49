"""
分支胞腔枚举

递归拆分 min/max 节点，把分段线性表达式在参数多面体上分解为仿射胞腔
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ratgeom import HPoly, hrep_to_vrep, vrep_to_hrep
from ratgeom.linalg import QVec, affine_rank
from utils.errors import ConsistencyError, NOBodyError

from .expr import Affine, AffineForm, Max, Min, Pos, PwlExpr, Scale, Sum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BranchCell:
    """
    分支胞腔：在 guard 上表达式恒等于 active_form

    Args:
        active_form: 活跃仿射形式
        guard: 参数空间中的H表示胞腔
        vertices: 胞腔顶点
    """

    active_form: AffineForm
    guard: HPoly
    vertices: Tuple[QVec, ...]

    def centroid(self) -> QVec:
        n = len(self.vertices)
        return tuple(sum(col, Fraction(0)) / n for col in zip(*self.vertices))


class _Cell:
    """枚举过程中的胞腔(H表示+顶点)"""

    def __init__(self, guard: HPoly, vertices: Sequence[QVec]):
        self.guard = guard
        self.vertices = tuple(vertices)


def _values(form: AffineForm, cell: _Cell, variables: Sequence[str]) -> List[Fraction]:
    return [form.evaluate(dict(zip(variables, v))) for v in cell.vertices]


def _restrict(cell: _Cell, form: AffineForm, variables: Sequence[str]) -> _Cell:
    """cell ∩ {form ≥ 0}"""
    normal, c = form.to_vector(variables)
    guard = cell.guard.with_inequality(normal, -c)
    v = hrep_to_vrep(guard)
    return _Cell(vrep_to_hrep(v), v.vertices)


def _split(f1: AffineForm, f2: AffineForm, cell: _Cell, variables: Sequence[str],
           take_min: bool) -> List[Tuple[AffineForm, _Cell]]:
    """在 cell 上比较 f1 与 f2，返回各自占优的子胞腔"""
    diff = f2 - f1
    values = _values(diff, cell, variables)
    lo_is_f1 = take_min
    if all(v >= 0 for v in values):
        return [(f1 if lo_is_f1 else f2, cell)]
    if all(v <= 0 for v in values):
        return [(f2 if lo_is_f1 else f1, cell)]
    # 超平面穿过胞腔内部，两侧都是满维的
    upper = _restrict(cell, diff, variables)
    lower = _restrict(cell, -diff, variables)
    if take_min:
        return [(f1, upper), (f2, lower)]
    return [(f2, upper), (f1, lower)]


def _cells(node: PwlExpr, cell: _Cell, variables: Sequence[str]) -> List[Tuple[AffineForm, _Cell]]:
    if isinstance(node, Affine):
        return [(node.form, cell)]
    if isinstance(node, Scale):
        return [(f * node.factor, c) for f, c in _cells(node.child, cell, variables)]
    if isinstance(node, Sum):
        acc = [(AffineForm(), cell)]
        for child in node.children:
            nxt = []
            for f, c in acc:
                for fc, cc in _cells(child, c, variables):
                    nxt.append((f + fc, cc))
            acc = nxt
        return acc
    if isinstance(node, (Min, Max, Pos)):
        take_min = isinstance(node, Min)
        children = (node.child, Affine(AffineForm())) if isinstance(node, Pos) else node.children
        acc = _cells(children[0], cell, variables)
        for child in children[1:]:
            nxt = []
            for f, c in acc:
                for fc, cc in _cells(child, c, variables):
                    nxt.extend(_split(f, fc, cc, variables, take_min))
            acc = nxt
        return acc
    raise NOBodyError(f"不支持的表达式节点: {type(node).__name__}")


def _domain_cell(domain: HPoly) -> _Cell:
    v = hrep_to_vrep(domain)
    if v.rays:
        raise NOBodyError("分支枚举要求有界参数区域")
    if affine_rank(list(v.vertices)) < domain.dim:
        raise NOBodyError("分支枚举要求满维参数区域")
    return _Cell(vrep_to_hrep(v), v.vertices)


def certify(expr: PwlExpr, cell: BranchCell, variables: Sequence[str]) -> None:
    """在重心与全部顶点处验证 expr 等于活跃形式"""
    for point in (cell.centroid(),) + cell.vertices:
        env = dict(zip(variables, point))
        if expr.evaluate(env) != cell.active_form.evaluate(env):
            raise ConsistencyError(f"分支胞腔验证失败: 点 {point} 处 {expr} != {cell.active_form}")


def branches(expr: PwlExpr, domain: HPoly, variables: Sequence[str]) -> List[BranchCell]:
    """
    分支胞腔分解

    Args:
        expr: 分段线性表达式(除 variables 外不含自由参数)
        domain: 有界满维参数区域
        variables: 区域坐标对应的参数名

    Returns:
        List[BranchCell]: 覆盖区域、内部互不相交的胞腔
    """
    variables = list(variables)
    if len(variables) != domain.dim:
        raise NOBodyError(f"变量个数 {len(variables)} 与区域维数 {domain.dim} 不符")
    extra = expr.variables() - set(variables)
    if extra:
        raise NOBodyError(f"表达式含有未代入的参数: {sorted(extra)}")
    raw = _cells(expr, _domain_cell(domain), variables)
    cells = [BranchCell(f, c.guard, c.vertices) for f, c in raw]
    for cell in cells:
        certify(expr, cell, variables)
    logger.debug("分支枚举: %s -> %d 个胞腔", expr, len(cells))
    return cells


def merged_branches(expr: PwlExpr, domain: HPoly, variables: Sequence[str]) -> List[BranchCell]:
    """合并活跃形式相同且在一维区域上相邻的胞腔(用于断点列表)"""
    cells = branches(expr, domain, variables)
    if domain.dim != 1:
        return cells
    cells = sorted(cells, key=lambda c: min(v[0] for v in c.vertices))
    merged: List[BranchCell] = []
    for cell in cells:
        lo = min(v[0] for v in cell.vertices)
        hi = max(v[0] for v in cell.vertices)
        if merged and merged[-1].active_form == cell.active_form:
            prev = merged[-1]
            plo = min(v[0] for v in prev.vertices)
            phi = max(v[0] for v in prev.vertices)
            if phi == lo:
                guard = HPoly(1, (((Fraction(1),), plo), ((Fraction(-1),), -hi)))
                merged[-1] = BranchCell(cell.active_form, guard, ((plo,), (hi,)))
                continue
        merged.append(cell)
    return merged


def breakpoints(expr: PwlExpr, name: str, lo, hi) -> List[Fraction]:
    """
    一维断点

    Args:
        expr: 只含参数 name 的表达式
        name: 参数名
        lo: 区间左端
        hi: 区间右端

    Returns:
        List[Fraction]: 含端点的升序断点列表
    """
    lo, hi = Fraction(lo), Fraction(hi)
    domain = HPoly(1, (((Fraction(1),), lo), ((Fraction(-1),), -hi)))
    points = set()
    for cell in merged_branches(expr, domain, [name]):
        for v in cell.vertices:
            points.add(v[0])
    return sorted(points)



def concave_pieces(expr: PwlExpr, domain: HPoly, variables: Sequence[str]) -> List[AffineForm]:
    """
    凹包络分解：验证 expr = min(各胞腔形式)，返回不同的仿射形式

    Args:
        expr: 在区域上为凹函数的表达式
        domain: 参数区域
        variables: 参数名

    Returns:
        List[AffineForm]: 定义上图的仿射形式

    Raises:
        ConsistencyError: 表达式在区域上不是凹的
    """
    cells = branches(expr, domain, variables)
    forms: List[AffineForm] = []
    for cell in cells:
        if cell.active_form not in forms:
            forms.append(cell.active_form)
    for cell in cells:
        for v in cell.vertices:
            env = dict(zip(variables, v))
            value = cell.active_form.evaluate(env)
            if any(f.evaluate(env) < value for f in forms):
                raise ConsistencyError(f"表达式在区域上不是凹函数: {expr}")
    return forms
