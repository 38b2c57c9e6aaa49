"""
NO 体的 t-截面

在载体曲面 (例外除子的严格变换) 上，对 (P_σ(ρ*L_t) + x·ρ*E)|_Ẽ 沿 x 做 Zariski 扫描：
0 ≤ x ≤ 大性阈值，0 ≤ y ≤ P_σ(限制类)·(-ρ*E|_Ẽ)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

import pandas as pd

from pwl import parse_pwl
from ratgeom import VPoly, volume
from ratgeom.linalg import QVec, add, is_zero, scale
from surface import SurfaceModel, graph_polygon, zariski
from threefold import ModelFamily, family_tower, stage_env, stage_psigma
from threefold.sigma import mu
from threefold.tower import Component, Tower, TowerStage
from utils.errors import ConsistencyError, ParameterRangeError, UnsupportedFamilyError
from utils.helpers import format_rational, parse_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlicePolygon:
    """
    截面多边形

    Args:
        t: 截取值
        polygon: (x, y) 平面上的多边形，端点处退化
    """

    t: Fraction
    polygon: VPoly

    @property
    def vertices(self) -> Tuple[QVec, ...]:
        return self.polygon.sorted().vertices

    def area(self) -> Fraction:
        return volume(self.polygon)


@dataclass(frozen=True)
class Carrier:
    """载体曲面及其上的方向 -ρ*E|_Ẽ"""

    tower: Tower
    stage: TowerStage
    component: Component
    exceptional: QVec

    @property
    def surface(self) -> SurfaceModel:
        return self.component.surface

    @property
    def direction(self) -> QVec:
        return scale(Fraction(-1), self.component.restrict(self.exceptional))


def carrier(family: ModelFamily) -> Carrier:
    tower = family_tower(family)
    data = tower.carrier
    stage = tower.stage(data.get("stage", tower.top.name))
    comp = stage.component(data["component"])
    return Carrier(tower, stage, comp, stage.class_named(data.get("exceptional", "E")))


def _parse_t(value) -> Fraction:
    return parse_rational(value) if isinstance(value, str) else Fraction(value)


def carrier_class(family: ModelFamily, t, x=0) -> QVec:
    """(P_σ(ρ*L_t) + x·ρ*E)|_Ẽ"""
    c = carrier(family)
    decomp = stage_psigma(family, t, c.stage.name)
    return c.component.restrict(add(decomp.positive.cls, scale(Fraction(x), c.exceptional)))


def slice_at(family: ModelFamily, t) -> SlicePolygon:
    """
    截面 Δ ∩ {ν₁ = t}

    Args:
        family: 模型族
        t: 0 ≤ t ≤ μ；t = 0 时为点 (0, 0)

    Returns:
        SlicePolygon: (x, y) 多边形
    """
    t = _parse_t(t)
    top = mu(family)
    if t < 0 or t > top:
        raise ParameterRangeError(f"{family.label()}: t = {t} 不在 [0, {top}] 内")
    origin = VPoly(2, ((Fraction(0), Fraction(0)),))
    if t == 0:
        return SlicePolygon(t, origin)
    c = carrier(family)
    d = carrier_class(family, t)
    if is_zero(d):
        return SlicePolygon(t, origin)
    polygon = graph_polygon(c.surface, d, c.direction)
    logger.debug("%s t = %s: 截面 %d 个顶点", family.label(), t, len(polygon.vertices))
    return SlicePolygon(t, polygon)


@dataclass(frozen=True)
class CarrierCorrection:
    """
    载体上负曲线的修正量

    Args:
        curve: 曲线名
        closed: 闭式 (数据中的公式)
        computed: (-α·C)₊ / (-C²)
        negative: α 的 Zariski 负部在 C 上的系数
    """

    curve: str
    closed: Fraction
    computed: Fraction
    negative: Fraction


def carrier_corrections(family: ModelFamily, t, x) -> List[CarrierCorrection]:
    """
    比较闭式修正量与载体上直接求得的值

    Args:
        family: 带 corrections 数据的模型族 (C×Jac)
        t: 0 < t < μ
        x: 截面内的 x

    Returns:
        List[CarrierCorrection]: 按曲线名排序

    Raises:
        ConsistencyError: 闭式与计算值不一致
    """
    c = carrier(family)
    texts: Dict[str, str] = c.tower.carrier.get("corrections") or {}
    if not texts:
        raise UnsupportedFamilyError(f"{family.kind} 的载体没有修正量数据")
    t, x = _parse_t(t), _parse_t(x)
    values = stage_env(c.tower, family, t)
    values["x"] = x
    alpha = carrier_class(family, t, x)
    model = c.surface
    negative = zariski(model, alpha).negative_coeffs
    out = []
    for name in sorted(texts):
        curve = model.curve(name).cls
        closed = parse_pwl(texts[name]).evaluate(values)
        computed = max(-model.dot(alpha, curve), Fraction(0)) / -model.square(curve)
        if closed != computed:
            raise ConsistencyError(f"{family.label()} t = {t}, x = {x}: 曲线 {name} 的修正量闭式 {closed} != {computed}")
        out.append(CarrierCorrection(name, closed, computed, negative.get(name, Fraction(0))))
    return out


def slice_area_curve(family: ModelFamily, step) -> pd.DataFrame:
    """
    按步长采样 (t, 截面面积)

    Returns:
        pd.DataFrame: 列 t, area，取值为 "p/q" 字符串
    """
    step = _parse_t(step)
    if step <= 0:
        raise ParameterRangeError(f"步长必须为正: {step}")
    top = mu(family)
    samples = []
    t = Fraction(0)
    while t < top:
        samples.append(t)
        t += step
    samples.append(top)
    rows = [{'t': format_rational(t), 'area': format_rational(slice_at(family, t).area())} for t in samples]
    return pd.DataFrame(rows, columns=['t', 'area'])
