"""
Zariski 分解

Fujita 不动点迭代：负曲线支撑集逐步扩大，直到候选正部与所有列出的曲线相交非负。
参数化版本在 t0 的右邻域上按字典序比较 (值, 斜率)，得到仿射的分解胚
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ratgeom.linalg import QVec, combine, det, qvec, scale, solve, sub, zeros
from utils.errors import ConsistencyError, ZariskiError

from .model import Curve, SurfaceModel

logger = logging.getLogger(__name__)

Lex = Tuple[Fraction, Fraction]


def _lex_negative(q: Lex) -> bool:
    return q[0] < 0 or (q[0] == 0 and q[1] < 0)


def _negative_definite(gram: Sequence[Sequence[Fraction]]) -> bool:
    """Sylvester 判据：-G 的顺序主子式全为正"""
    n = len(gram)
    neg = [[-a for a in row] for row in gram]
    return all(det([row[:k] for row in neg[:k]]) > 0 for k in range(1, n + 1))


@dataclass(frozen=True)
class ZariskiDecomp:
    """
    Zariski 分解 d = P + Σ cᵢ·Cᵢ

    Args:
        positive: 正部
        negative: (曲线名, 系数)，系数为正
        support: 迭代结束时的支撑曲线
    """

    positive: QVec
    negative: Tuple[Tuple[str, Fraction], ...]
    support: Tuple[str, ...] = ()
    iterations: int = 0

    @property
    def negative_coeffs(self) -> Dict[str, Fraction]:
        return dict(self.negative)

    def negative_class(self, model: SurfaceModel) -> QVec:
        return combine([c for _, c in self.negative],
                       [model.curve(name).cls for name, _ in self.negative], model.rank)


@dataclass(frozen=True)
class ZariskiGerm:
    """
    t0 右邻域上的仿射分解：P(t) = P0 + (t - t0)·P1

    Args:
        t0: 起点
        support: 支撑曲线
        positive: t0 处正部
        positive_slope: 正部对 t 的导数
        coeffs: 支撑曲线系数 (t0 处值, 斜率)
    """

    t0: Fraction
    support: Tuple[str, ...]
    positive: QVec
    positive_slope: QVec
    coeffs: Tuple[Tuple[str, Fraction, Fraction], ...]

    def positive_at(self, t) -> QVec:
        s = Fraction(t) - self.t0
        return tuple(a + s * b for a, b in zip(self.positive, self.positive_slope))

    def negative_at(self, t) -> Dict[str, Fraction]:
        s = Fraction(t) - self.t0
        out = {}
        for name, a, b in self.coeffs:
            value = a + s * b
            if value:
                out[name] = value
        return out


@dataclass(frozen=True)
class ZariskiPiece:
    """扫描中的一段 [lo, hi]，其上分解为 germ 给出的仿射函数"""

    lo: Fraction
    hi: Fraction
    germ: ZariskiGerm


def _fixpoint(model: SurfaceModel, base: QVec, slope: QVec,
              curves: Sequence[Curve]) -> Tuple[List[Curve], List[Fraction], List[Fraction], QVec, QVec, int]:
    """字典序不动点迭代，返回 (支撑, 系数值, 系数斜率, 正部, 正部斜率, 迭代次数)"""
    support: List[Curve] = [c for c in curves
                            if _lex_negative((model.dot(base, c.cls), model.dot(slope, c.cls)))]
    iterations = 0
    while True:
        iterations += 1
        if iterations > len(curves) + 2:
            raise ZariskiError(f"模型 {model.name}: 不动点迭代未收敛")
        x0: List[Fraction] = []
        x1: List[Fraction] = []
        if support:
            gram = [[model.dot(a.cls, b.cls) for b in support] for a in support]
            if not _negative_definite(gram):
                raise ZariskiError(
                    f"模型 {model.name}: 支撑 {[c.name for c in support]} 的Gram矩阵不是负定的，"
                    f"负曲线列表不完整或类不是伪有效的"
                )
            sol0 = solve(gram, [model.dot(base, c.cls) for c in support])
            sol1 = solve(gram, [model.dot(slope, c.cls) for c in support])
            if sol0 is None or sol1 is None:
                raise ZariskiError(f"模型 {model.name}: 线性方程组不相容")
            x0, x1 = list(sol0), list(sol1)
        classes = [c.cls for c in support]
        p0 = sub(base, combine(x0, classes, model.rank))
        p1 = sub(slope, combine(x1, classes, model.rank))
        names = {c.name for c in support}
        new = [c for c in model.curves if c.name not in names
               and _lex_negative((model.dot(p0, c.cls), model.dot(p1, c.cls)))]
        if not new:
            break
        if any(c.auxiliary for c in new):
            raise ZariskiError(f"模型 {model.name}: 正部与辅助检验曲线相交为负，类不是伪有效的")
        logger.debug("Zariski 迭代 %d: 加入 %s", iterations, [c.name for c in new])
        support.extend(new)
    for c, a, b in zip(support, x0, x1):
        if _lex_negative((a, b)):
            raise ZariskiError(
                f"模型 {model.name}: 曲线 {c.name} 的负部系数为负，负曲线列表不完整或类不是伪有效的"
            )
    return support, x0, x1, p0, p1, iterations


def zariski(model: SurfaceModel, d: Sequence[Fraction]) -> ZariskiDecomp:
    """
    Zariski 分解

    Args:
        model: 曲面模型
        d: 伪有效类

    Returns:
        ZariskiDecomp: 正部与负部
    """
    d = qvec(d)
    support, x0, _, p0, _, iterations = _fixpoint(model, d, zeros(model.rank), model.negative_curves)
    negative = tuple((c.name, x) for c, x in zip(support, x0) if x != 0)
    return ZariskiDecomp(p0, negative, tuple(c.name for c in support), iterations)


def check_decomposition(model: SurfaceModel, d: Sequence[Fraction], z: ZariskiDecomp) -> None:
    """
    验证分解的全部不变量

    Raises:
        ConsistencyError: 任一不变量不成立
    """
    d = qvec(d)
    total = tuple(a + b for a, b in zip(z.positive, z.negative_class(model)))
    if total != d:
        raise ConsistencyError(f"P + N != d: {total} != {d}")
    names = [name for name, _ in z.negative]
    for name, coeff in z.negative:
        if coeff < 0:
            raise ConsistencyError(f"负部系数为负: {name} = {coeff}")
        if model.dot(z.positive, model.curve(name).cls) != 0:
            raise ConsistencyError(f"正部与支撑曲线 {name} 不正交")
    for c in model.curves:
        if model.dot(z.positive, c.cls) < 0:
            raise ConsistencyError(f"正部与曲线 {c.name} 相交为负")
    if names:
        gram = [[model.dot(model.curve(a).cls, model.curve(b).cls) for b in names] for a in names]
        if not _negative_definite(gram):
            raise ConsistencyError(f"负部支撑 {names} 的Gram矩阵不是负定的")


def zariski_germ(model: SurfaceModel, d: Sequence[Fraction], direction: Sequence[Fraction], t0) -> ZariskiGerm:
    """
    d - t·direction 在 t0 右邻域上的仿射分解

    Args:
        model: 曲面模型
        d: 起始类
        direction: 方向
        t0: 起点

    Returns:
        ZariskiGerm: 分解胚
    """
    t0 = Fraction(t0)
    d, direction = qvec(d), qvec(direction)
    base = sub(d, scale(t0, direction))
    slope = scale(Fraction(-1), direction)
    support, x0, x1, p0, p1, _ = _fixpoint(model, base, slope, model.negative_curves)
    coeffs = tuple((c.name, a, b) for c, a, b in zip(support, x0, x1))
    return ZariskiGerm(t0, tuple(c.name for c in support), p0, p1, coeffs)


def next_breakpoint(model: SurfaceModel, germ: ZariskiGerm) -> Optional[Fraction]:
    """
    分解胚失效的最小 t > t0：某支撑系数降到0，或某曲线与正部的交数降到0

    Returns:
        Optional[Fraction]: 断点；在 t → ∞ 前都不失效时返回None
    """
    candidates = []
    for _, a, b in germ.coeffs:
        if a > 0 and b < 0:
            candidates.append(a / -b)
    names = set(germ.support)
    for c in model.curves:
        if c.name in names:
            continue
        a = model.dot(germ.positive, c.cls)
        b = model.dot(germ.positive_slope, c.cls)
        if a > 0 and b < 0:
            candidates.append(a / -b)
    if not candidates:
        return None
    return germ.t0 + min(candidates)


def _certify_piece(model: SurfaceModel, d: QVec, direction: QVec, piece: ZariskiPiece) -> None:
    """在两端点与中点用普通 Zariski 分解验证仿射预测"""
    for t in (piece.lo, (piece.lo + piece.hi) / 2, piece.hi):
        actual = zariski(model, sub(d, scale(t, direction))).positive
        if actual != piece.germ.positive_at(t):
            raise ConsistencyError(
                f"模型 {model.name}: t = {t} 处扫描正部 {piece.germ.positive_at(t)} 与直接分解 {actual} 不一致"
            )


def zariski_sweep(model: SurfaceModel, d: Sequence[Fraction], direction: Sequence[Fraction],
                  t_start, t_end) -> List[ZariskiPiece]:
    """
    参数扫描：把 [t_start, t_end] 分成正部为仿射函数的若干段

    Args:
        model: 曲面模型
        d: 起始类
        direction: 方向
        t_start: 起点
        t_end: 终点(不超过伪有效阈值)

    Returns:
        List[ZariskiPiece]: 各段及其分解胚
    """
    d, direction = qvec(d), qvec(direction)
    t, t_end = Fraction(t_start), Fraction(t_end)
    pieces: List[ZariskiPiece] = []
    while t < t_end:
        germ = zariski_germ(model, d, direction, t)
        nxt = next_breakpoint(model, germ)
        hi = t_end if nxt is None else min(nxt, t_end)
        piece = ZariskiPiece(t, hi, germ)
        _certify_piece(model, d, direction, piece)
        pieces.append(piece)
        logger.debug("Zariski 扫描 %s: [%s, %s] 支撑 %s", model.name, t, hi, list(germ.support))
        t = hi
    return pieces
