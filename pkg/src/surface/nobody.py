"""
曲面 Newton–Okounkov 多边形

一般无穷小旗下 (α ≡ 0)，多边形为 {0 ≤ t ≤ μ, 0 ≤ x ≤ β(t)}，β(t) = P_σ(d - t·C)·C
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from ratgeom import VPoly, minimize
from ratgeom.linalg import QVec, qvec
from utils.errors import NOBodyError, NotBigError, ParameterRangeError

from .model import SurfaceModel
from .zariski import zariski, zariski_sweep

logger = logging.getLogger(__name__)

ClassLike = Union[str, Sequence[Fraction]]


def _resolve(model: SurfaceModel, cls: ClassLike) -> QVec:
    if isinstance(cls, str):
        return model.parse_class(cls)
    return qvec(cls)


def beta_profile(model: SurfaceModel, d: Sequence[Fraction], direction: Sequence[Fraction],
                 t_range: Optional[Tuple] = None) -> List[Tuple[Fraction, Fraction]]:
    """
    β(t) = P_σ(d - t·direction)·direction 在各断点处的取值

    Args:
        model: 曲面模型
        d: 伪有效类
        direction: 方向类
        t_range: (起点, 终点)，默认 [0, μ]

    Returns:
        List[Tuple[Fraction, Fraction]]: (t, β(t))，t 递增；β 在相邻点之间是仿射的
    """
    d, direction = qvec(d), qvec(direction)
    mu = model.mu_of(d, direction)
    lo, hi = (Fraction(0), mu) if t_range is None else (Fraction(t_range[0]), Fraction(t_range[1]))
    if lo < 0 or hi > mu or lo > hi:
        raise ParameterRangeError(f"t 范围 [{lo}, {hi}] 不在 [0, {mu}] 内")
    if lo == hi:
        p = zariski(model, [a - lo * b for a, b in zip(d, direction)]).positive
        return [(lo, model.dot(p, direction))]
    profile: List[Tuple[Fraction, Fraction]] = []
    for piece in zariski_sweep(model, d, direction, lo, hi):
        for t in (piece.lo, piece.hi):
            value = model.dot(piece.germ.positive_at(t), direction)
            if profile and profile[-1][0] == t:
                if profile[-1][1] != value:
                    raise NOBodyError(f"β 在 t = {t} 处不连续: {profile[-1][1]} != {value}")
                continue
            profile.append((t, value))
    return profile


def graph_polygon(model: SurfaceModel, d: Sequence[Fraction], direction: Sequence[Fraction],
                  t_range: Optional[Tuple] = None) -> VPoly:
    """
    β 图像下方的多边形 {lo ≤ t ≤ hi, 0 ≤ x ≤ β(t)}

    Returns:
        VPoly: 极小V表示；退化情形为线段或点
    """
    points = []
    for t, b in beta_profile(model, d, direction, t_range):
        if b < 0:
            raise NOBodyError(f"β({t}) = {b} 为负")
        points.extend([(t, Fraction(0)), (t, b)])
    return minimize(VPoly(2, tuple(points)))


def nobody_surface(model: SurfaceModel, d: ClassLike, flag_curve: ClassLike,
                   generic: bool = True, t_range: Optional[Tuple] = None) -> VPoly:
    """
    曲面的一般无穷小 Newton–Okounkov 多边形

    Args:
        model: 点爆破后的曲面模型
        d: 大除子类
        flag_curve: 例外曲线 C，L_t = d - t·C
        generic: 旗是否一般；非一般旗 (α ≢ 0) 不支持
        t_range: 截取的 t 区间，默认 [0, μ]

    Returns:
        VPoly: 多边形 (t, x)
    """
    if not generic:
        raise NOBodyError("非一般旗 (α ≢ 0) 不在支持范围内")
    d = _resolve(model, d)
    flag = _resolve(model, flag_curve)
    if not model.is_pseudoeffective(d):
        raise NotBigError(f"类 {d} 不是伪有效的")
    if model.square(zariski(model, d).positive) <= 0:
        raise NotBigError(f"类 {d} 不是大除子: 正部自交非正")
    polygon = graph_polygon(model, d, flag, t_range)
    logger.info("模型 %s 的 NO 多边形: %d 个顶点", model.name, len(polygon.vertices))
    return polygon
