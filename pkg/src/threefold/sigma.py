"""
σ-分解与体积

闭式正部、由三重交数独立验证的体积、逐段体积多项式、负部证书与逐分量 nef 判定
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
import sympy

from pwl import breakpoints, sympify_formula, symbol, to_fraction
from ratgeom import HPoly, is_feasible
from ratgeom.linalg import QVec, add, qvec, scale, sub
from utils.errors import ConsistencyError, NOBodyError, ParameterRangeError
from utils.helpers import format_rational, parse_rational

from .families import ModelFamily
from .tower import TowerStage, family_tower, stage_env

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Divisor3:
    """三维塔某一级上的除子类"""

    stage: str
    cls: QVec


@dataclass(frozen=True)
class SigmaDecomp3:
    """
    σ-分解 ρ*L_t = P + Σ σ_Y·Y

    Args:
        family: 模型族
        t: 参数
        positive: 正部
        negative: (素分量名, 系数)，系数为正
        values: 账本取值
    """

    family: ModelFamily
    t: Fraction
    positive: Divisor3
    polarization: Divisor3
    negative: Tuple[Tuple[str, Fraction], ...]
    values: Tuple[Tuple[str, Fraction], ...] = ()

    @property
    def negative_coeffs(self) -> Dict[str, Fraction]:
        return dict(self.negative)

    @property
    def ledger_values(self) -> Dict[str, Fraction]:
        return dict(self.values)


def mu(family: ModelFamily) -> Fraction:
    """伪有效阈值 μ(L; x)"""
    return family_tower(family).mu.evaluate(family.env())


def _check_t(family: ModelFamily, t) -> Fraction:
    t = parse_rational(t) if isinstance(t, str) else Fraction(t)
    top = mu(family)
    if t < 0 or t > top:
        raise ParameterRangeError(f"{family.label()}: t = {t} 不在 [0, {top}] 内")
    return t


def stage_psigma(family: ModelFamily, t, stage_name: Optional[str] = None) -> SigmaDecomp3:
    """
    某一级上 L_t 的闭式 σ-分解

    Args:
        family: 模型族
        t: 0 ≤ t ≤ μ
        stage_name: 级名，默认顶层

    Returns:
        SigmaDecomp3: 正部与各素分量上的负部系数
    """
    t = _check_t(family, t)
    tower = family_tower(family)
    stage = tower.top if stage_name is None else tower.stage(stage_name)
    values = stage_env(tower, family, t)
    lt = stage.parse_class(stage.polarization, values)
    p = stage.parse_class(stage.positive_part, values)
    coords = stage.component_coordinates(sub(lt, p))
    negative = []
    for comp, c in zip(stage.components, coords):
        if c < 0:
            raise ConsistencyError(f"{family.label()} t = {t}: 分量 {comp.name} 上负部系数为负 ({c})")
        if c:
            negative.append((comp.name, c))
    return SigmaDecomp3(family, t, Divisor3(stage.name, p), Divisor3(stage.name, lt),
                        tuple(negative), tuple(sorted(values.items())))


def psigma(family: ModelFamily, t) -> SigmaDecomp3:
    """顶层上 ρ*L_t 的 σ-分解"""
    return stage_psigma(family, t)


def check_pushforward(family: ModelFamily, t) -> None:
    """
    顶层正部逐级推出必须等于下一级的闭式正部

    Raises:
        ConsistencyError: 推出不一致
    """
    tower = family_tower(family)
    upper = stage_psigma(family, t)
    stage = tower.top
    while stage.parent is not None:
        lower = stage_psigma(family, t, stage.parent)
        pushed = tower.push_down(upper.positive.cls, upper.positive.stage, stage.parent)
        if pushed != lower.positive.cls:
            raise ConsistencyError(f"{family.label()} t = {t}: 正部推出 {pushed} 与级 {stage.parent} 的 {lower.positive.cls} 不一致")
        upper = lower
        stage = tower.stage(stage.parent)


def closed_form_volume(family: ModelFamily, t) -> Fraction:
    """按体积闭式求值"""
    t = _check_t(family, t)
    tower = family_tower(family)
    values = stage_env(tower, family, t)
    expr = sympify_formula(tower.volume)
    value = expr.subs({symbol(k): sympy.Rational(v.numerator, v.denominator) for k, v in values.items()})
    return to_fraction(value)


def vol_ray(family: ModelFamily, t) -> Fraction:
    """
    vol(L_t)

    闭式与顶层 (P_σ³) 两条路径独立计算并断言一致

    Args:
        family: 模型族
        t: 0 ≤ t ≤ μ

    Returns:
        Fraction: 体积
    """
    decomp = psigma(family, t)
    stage = family_tower(family).top
    p = decomp.positive.cls
    by_triple = stage.triple(p, p, p)
    closed = closed_form_volume(family, decomp.t)
    if by_triple != closed:
        raise ConsistencyError(f"{family.label()} t = {decomp.t}: 体积闭式 {closed} != (P³) = {by_triple}")
    return closed


@dataclass(frozen=True)
class VolumePiece:
    """[lo, hi] 上 vol(L_t) 为 t 的多项式"""

    lo: Fraction
    hi: Fraction
    polynomial: sympy.Expr

    def at(self, t) -> Fraction:
        return to_fraction(self.polynomial.subs(symbol("t"), sympy.Rational(str(Fraction(t)))))


def volume_breakpoints(family: ModelFamily) -> List[Fraction]:
    """账本各系数作为 t 的函数的全部断点(含端点)"""
    tower = family_tower(family)
    top = mu(family)
    params = family.env()
    points = {Fraction(0), top}
    for name in tower.ledger.names:
        expr = tower.ledger.resolve(name).substitute(params)
        if expr.variables() - {tower.time}:
            raise NOBodyError(f"账本系数 {name} 含有未代入的参数: {sorted(expr.variables())}")
        if not expr.variables():
            continue
        points.update(breakpoints(expr, tower.time, 0, top))
    return sorted(points)


def volume_pieces(family: ModelFamily) -> List[VolumePiece]:
    """
    逐段体积多项式：每段用4点插值，在第5点验证

    Returns:
        List[VolumePiece]: 相邻段多项式不同
    """
    t = symbol("t")
    points = volume_breakpoints(family)
    pieces: List[VolumePiece] = []
    for lo, hi in zip(points, points[1:]):
        samples = [lo + (hi - lo) * k / 3 for k in range(4)]
        data = [(sympy.Rational(str(x)), sympy.Rational(str(vol_ray(family, x)))) for x in samples]
        poly = sympy.expand(sympy.interpolate(data, t))
        mid = (lo + hi) / 2
        piece = VolumePiece(lo, hi, poly)
        if piece.at(mid) != vol_ray(family, mid):
            raise ConsistencyError(f"{family.label()}: [{lo}, {hi}] 上体积不是三次多项式")
        if pieces and sympy.expand(pieces[-1].polynomial - poly) == 0:
            pieces[-1] = VolumePiece(pieces[-1].lo, hi, poly)
            continue
        if pieces and pieces[-1].at(lo) != piece.at(lo):
            raise ConsistencyError(f"{family.label()}: 体积在 t = {lo} 处不连续")
        pieces.append(piece)
    logger.info("%s 的体积分为 %d 段", family.label(), len(pieces))
    return pieces


def volume_curve(family: ModelFamily, step) -> pd.DataFrame:
    """
    按步长采样 (t, vol)

    Args:
        family: 模型族
        step: 正有理步长

    Returns:
        pd.DataFrame: 列 t, vol，取值为 "p/q" 字符串
    """
    step = parse_rational(step) if isinstance(step, str) else Fraction(step)
    if step <= 0:
        raise ParameterRangeError(f"步长必须为正: {step}")
    top = mu(family)
    rows = []
    t = Fraction(0)
    while t < top:
        rows.append({'t': format_rational(t), 'vol': format_rational(vol_ray(family, t))})
        t += step
    rows.append({'t': format_rational(top), 'vol': format_rational(vol_ray(family, top))})
    return pd.DataFrame(rows, columns=['t', 'vol'])


@dataclass(frozen=True)
class NegativeCertificate:
    """
    负部极小性证书：(P + ε·Y)|_Y 不是伪有效的

    Args:
        stage: 级名
        component: 素分量
        sigma: 负部系数
        epsilon: 扰动
        restricted: 限制类
        certified: 限制类确实不是伪有效的
    """

    stage: str
    component: str
    sigma: Fraction
    epsilon: Fraction
    restricted: QVec
    certified: bool


def negative_part_certificates(family: ModelFamily, t) -> List[NegativeCertificate]:
    """
    对塔数据列出的分量，在负部系数为正时检验 (P + ε·Y)|_Y 非伪有效，ε = σ/2

    Returns:
        List[NegativeCertificate]: 证书列表；负部系数为0的分量跳过
    """
    tower = family_tower(family)
    out = []
    for stage_name, comp_name in tower.certificates:
        decomp = stage_psigma(family, t, stage_name)
        sigma = decomp.negative_coeffs.get(comp_name, Fraction(0))
        if not sigma:
            continue
        stage = tower.stage(stage_name)
        comp = stage.component(comp_name)
        eps = sigma / 2
        restricted = comp.restrict(add(decomp.positive.cls, scale(eps, comp.cls)))
        certified = not comp.surface.is_pseudoeffective(restricted)
        out.append(NegativeCertificate(stage_name, comp_name, sigma, eps, restricted, certified))
    return out


@dataclass(frozen=True)
class NefVerdict:
    """
    逐分量 nef 判定结果

    Args:
        status: "nef" / "not_nef" / "inconclusive"
        restrictions: (分量名, 限制类, 该分量上相交为负的曲线)
        failing_curves: 相交为负的曲线标签
        decomposition: 说明 D 如何写成 nef 类与有效分量之和
    """

    status: str
    restrictions: Tuple[Tuple[str, QVec, Tuple[str, ...]], ...]
    failing_curves: Tuple[str, ...] = ()
    decomposition: str = ""

    @property
    def is_nef(self) -> bool:
        return self.status == "nef"

    def __bool__(self) -> bool:
        return self.is_nef


def _nef_plus_effective(stage: TowerStage, d: QVec) -> bool:
    """是否存在 d = Σ λᵢ·Nᵢ + Σ μₖ·Yₖ，λ, μ ≥ 0"""
    nefs = [stage.parse_class(text) for text in stage.nef_classes]
    columns = nefs + [comp.cls for comp in stage.components]
    n = len(columns)
    eqs = tuple((tuple(col[i] for col in columns), d[i]) for i in range(stage.rank))
    ineqs = tuple((tuple(Fraction(1 if k == j else 0) for k in range(n)), Fraction(0)) for j in range(n))
    return is_feasible(HPoly(n, ineqs, eqs))


def verify_nef3(stage: TowerStage, d: Sequence[Fraction]) -> NefVerdict:
    """
    用限制到素分量判定三维除子类的 nef 性

    每个分量上的限制都 nef，且 d 是 nef 类与这些分量的非负组合时 d 为 nef；
    某个分量上的限制不 nef 时 d 不是 nef；找不到非负分解时结论为 inconclusive

    Args:
        stage: 塔的一级
        d: 除子类

    Returns:
        NefVerdict: 判定与证书
    """
    d = qvec(d)
    rows = []
    failing: List[str] = []
    for comp in stage.components:
        restricted = comp.restrict(d)
        failures = tuple(comp.label(name) for name, _ in comp.surface.nef_failures(restricted))
        rows.append((comp.name, restricted, failures))
        failing.extend(f for f in failures if f not in failing)
    if failing:
        return NefVerdict("not_nef", tuple(rows), tuple(failing))
    coords = stage.component_coordinates(d)
    if all(c >= 0 for c in coords):
        return NefVerdict("nef", tuple(rows), (), "effective")
    if stage.nef_classes and _nef_plus_effective(stage, d):
        return NefVerdict("nef", tuple(rows), (), "nef+effective")
    logger.debug("级 %s: %s 没有非负分解，nef 判定不确定", stage.name, d)
    return NefVerdict("inconclusive", tuple(rows))


def verify_psigma_nef(family: ModelFamily, t) -> NefVerdict:
    """顶层正部的 nef 判定"""
    decomp = psigma(family, t)
    return verify_nef3(family_tower(family).top, decomp.positive.cls)
