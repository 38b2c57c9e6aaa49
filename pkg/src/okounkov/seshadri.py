"""
曲线类的 Seshadri 常数与投影面积比较

ε((L²); x) = sup{t : π*(L²) - t·ℓ 可动}，只需检验有效除子生成元 D = π*D₀ - k·E：
(π*L)²·D - t·(ℓ·D) ≥ 0，其中 ℓ·D = k
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

import sympy

from pwl import sympify_formula, symbol, to_fraction
from ratgeom import project, volume
from ratgeom.linalg import add, scale
from threefold import ModelFamily, family_tower
from utils.errors import ConsistencyError, DataFileError
from utils.helpers import parse_rational

from .bodies import body

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorBound:
    """
    单个有效生成元给出的约束

    Args:
        name: 生成元名
        degree: (π*L)²·π*D₀
        multiplicity: k
        bound: degree / k (k > 0 时)
    """

    name: str
    degree: Fraction
    multiplicity: Fraction
    bound: Optional[Fraction]


def _closed_value(formula: str, values: Dict[str, Fraction]) -> Fraction:
    expr = sympify_formula(formula)
    subs = {symbol(k): sympy.Rational(v.numerator, v.denominator) for k, v in values.items()}
    return to_fraction(expr.subs(subs))


def generator_bounds(family: ModelFamily) -> List[GeneratorBound]:
    """第一级上每个有效生成元的约束"""
    tower = family_tower(family)
    data = tower.seshadri
    if not data:
        raise DataFileError(f"塔 {tower.family} 没有 Seshadri 数据")
    stage = tower.stage(data["stage"])
    env = family.env(0)
    pullback_l = stage.parse_class(stage.polarization, env)
    exceptional = stage.class_named(tower.carrier.get("exceptional", "E"))
    out = []
    for row in data["generators"]:
        k = parse_rational(str(row["multiplicity"]))
        d0 = stage.parse_class(str(row["pullback"]), env)
        generator = add(d0, scale(-k, exceptional))
        if generator != stage.class_named(row["name"]):
            raise ConsistencyError(f"{tower.family}: 生成元 {row['name']} 不等于 π*({row['pullback']}) - {k}·E")
        degree = stage.triple(pullback_l, pullback_l, d0)
        bound = degree / k if k > 0 else None
        if k <= 0 and degree < 0:
            raise ConsistencyError(f"{tower.family}: 生成元 {row['name']} 上 (π*L)²·D₀ = {degree} < 0")
        out.append(GeneratorBound(row["name"], degree, k, bound))
    return out


def seshadri_curve(family: ModelFamily) -> Fraction:
    """
    曲线类 L² 在一般点的 Seshadri 常数

    Returns:
        Fraction: 最小的约束值，并与塔数据中的闭式比较
    """
    bounds = [b.bound for b in generator_bounds(family) if b.bound is not None]
    value = min(bounds)
    formula = family_tower(family).seshadri.get("formula")
    if formula:
        closed = _closed_value(formula, family.values)
        if closed != value:
            raise ConsistencyError(f"{family.label()}: ε((L²); x) = {value}，闭式为 {closed}")
    return value


@dataclass(frozen=True)
class AreaVerdict:
    """
    ε((L²); x) ≥ 2·area(体在 (x, y) 平面上的投影)

    Args:
        verdict: "equality" 或 "strict"
        lhs: Seshadri 常数
        rhs: 投影面积的两倍
    """

    verdict: str
    lhs: Fraction
    rhs: Fraction

    def to_dict(self) -> Dict[str, str]:
        return {"verdict": self.verdict, "lhs": str(self.lhs), "rhs": str(self.rhs)}


def projection_area_check(family: ModelFamily) -> AreaVerdict:
    """
    比较 Seshadri 常数与投影面积

    Raises:
        ConsistencyError: lhs < rhs
    """
    lhs = seshadri_curve(family)
    nobody = body(family)
    shadow = project(nobody.vrep, [1, 2])
    rhs = 2 * volume(shadow)
    if lhs < rhs:
        raise ConsistencyError(f"{family.label()}: ε = {lhs} < 2·面积 = {rhs}")
    verdict = "equality" if lhs == rhs else "strict"
    logger.info("%s: ε = %s, 2·面积 = %s (%s)", family.label(), lhs, rhs, verdict)
    return AreaVerdict(verdict, lhs, rhs)
