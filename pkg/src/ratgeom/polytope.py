"""
精确有理多面体

H表示(不等式)与V表示(顶点+射线)之间的双描述转换、投影、截面、体积、对偶锥和集合相等判定
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from utils.errors import DegeneratePairingError, InfeasibleError, NOBodyError, UnboundedError

from .linalg import (
    QVec, affine_rank, det, dot, is_zero, mat_vec, primitive, qvec, rank, scale, sub, unit, zeros,
)

logger = logging.getLogger(__name__)

Row = Tuple[QVec, Fraction]


def _canonical_row(normal: QVec, offset: Fraction) -> Row:
    """把 normal·x ≥ offset 缩放为本原整数形式"""
    prim = primitive(tuple(normal) + (offset,))
    return prim[:-1], prim[-1]


@dataclass(frozen=True)
class HPoly:
    """
    H表示多面体 {x : normal·x ≥ offset, eq_normal·x = eq_offset}

    Args:
        dim: 环境维数
        inequalities: (normal, offset) 列表
        equalities: (normal, offset) 列表
    """

    dim: int
    inequalities: Tuple[Row, ...] = ()
    equalities: Tuple[Row, ...] = ()

    def __post_init__(self):
        ineqs = []
        for normal, offset in self.inequalities:
            normal, offset = qvec(normal), Fraction(offset)
            if len(normal) != self.dim:
                raise NOBodyError(f"不等式维数错误: {len(normal)} != {self.dim}")
            if is_zero(normal):
                if offset > 0:
                    raise InfeasibleError(f"零法向量不等式不可行: 0 ≥ {offset}")
                continue
            ineqs.append((normal, offset))
        eqs = []
        for normal, offset in self.equalities:
            normal, offset = qvec(normal), Fraction(offset)
            if len(normal) != self.dim:
                raise NOBodyError(f"等式维数错误: {len(normal)} != {self.dim}")
            if is_zero(normal):
                if offset != 0:
                    raise InfeasibleError(f"零法向量等式不可行: 0 = {offset}")
                continue
            eqs.append((normal, offset))
        object.__setattr__(self, 'inequalities', tuple(ineqs))
        object.__setattr__(self, 'equalities', tuple(eqs))

    def contains(self, point: Sequence[Fraction]) -> bool:
        return (all(dot(n, point) >= b for n, b in self.inequalities)
                and all(dot(n, point) == b for n, b in self.equalities))

    def contains_direction(self, ray: Sequence[Fraction]) -> bool:
        """方向是否属于回收锥"""
        return (all(dot(n, ray) >= 0 for n, _ in self.inequalities)
                and all(dot(n, ray) == 0 for n, _ in self.equalities))

    def intersect(self, other: 'HPoly') -> 'HPoly':
        if other.dim != self.dim:
            raise NOBodyError(f"维数不一致: {self.dim} != {other.dim}")
        return HPoly(self.dim, self.inequalities + other.inequalities,
                     self.equalities + other.equalities)

    def with_inequality(self, normal: Sequence, offset) -> 'HPoly':
        return HPoly(self.dim, self.inequalities + ((qvec(normal), Fraction(offset)),),
                     self.equalities)

    def canonical(self) -> 'HPoly':
        """去重并缩放为本原整数行"""
        ineqs = sorted(set(_canonical_row(n, b) for n, b in self.inequalities))
        eqs = sorted(set(_canonical_row(n, b) for n, b in self.equalities))
        return HPoly(self.dim, tuple(ineqs), tuple(eqs))


@dataclass(frozen=True)
class VPoly:
    """
    V表示多面体 conv(vertices) + cone(rays)

    Args:
        dim: 环境维数
        vertices: 顶点列表
        rays: 射线列表(非空即无界)
    """

    dim: int
    vertices: Tuple[QVec, ...] = ()
    rays: Tuple[QVec, ...] = ()

    def __post_init__(self):
        verts = []
        seen = set()
        for v in self.vertices:
            v = qvec(v)
            if len(v) != self.dim:
                raise NOBodyError(f"顶点维数错误: {len(v)} != {self.dim}")
            if v not in seen:
                seen.add(v)
                verts.append(v)
        rays = []
        for r in self.rays:
            r = qvec(r)
            if len(r) != self.dim:
                raise NOBodyError(f"射线维数错误: {len(r)} != {self.dim}")
            if is_zero(r):
                raise NOBodyError("射线不能为零向量")
            rays.append(r)
        if not verts and not rays:
            raise NOBodyError("V表示不能为空")
        if not verts:
            verts = [zeros(self.dim)]
        object.__setattr__(self, 'vertices', tuple(verts))
        object.__setattr__(self, 'rays', tuple(rays))

    @property
    def bounded(self) -> bool:
        return not self.rays

    def sorted(self) -> 'VPoly':
        """顶点排序后的规范形式"""
        rays = sorted(set(primitive(r) for r in self.rays))
        return VPoly(self.dim, tuple(sorted(self.vertices)), tuple(rays))


@dataclass(frozen=True)
class QCone:
    """
    有理锥 cone(rays) + span(lineality)

    Args:
        dim: 环境维数
        rays: 生成射线
        lineality: 线性空间基
    """

    dim: int
    rays: Tuple[QVec, ...] = ()
    lineality: Tuple[QVec, ...] = ()

    def __post_init__(self):
        rays = tuple(qvec(r) for r in self.rays)
        lin = tuple(qvec(l) for l in self.lineality)
        for r in rays + lin:
            if len(r) != self.dim:
                raise NOBodyError(f"锥生成元维数错误: {len(r)} != {self.dim}")
            if is_zero(r):
                raise NOBodyError("锥生成元不能为零向量")
        if lin and rank(lin) != len(lin):
            raise NOBodyError("线性空间生成元必须线性无关")
        object.__setattr__(self, 'rays', rays)
        object.__setattr__(self, 'lineality', lin)

    def normalized(self) -> 'QCone':
        """射线缩放为本原整数向量并排序"""
        return QCone(self.dim, tuple(sorted(set(primitive(r) for r in self.rays))), self.lineality)

    def as_vpoly(self) -> VPoly:
        lines = [l for l in self.lineality] + [scale(Fraction(-1), l) for l in self.lineality]
        return VPoly(self.dim, (zeros(self.dim),), tuple(self.rays) + tuple(lines))


Polytope = Union[HPoly, VPoly, QCone]


# ---------------------------------------------------------------------------
# 双描述法
# ---------------------------------------------------------------------------

def _dd_cone(ineqs: Sequence[QVec], eqs: Sequence[QVec], dim: int) -> Tuple[List[QVec], List[QVec]]:
    """
    双描述法：{y : a·y ≥ 0 (a ∈ ineqs), b·y = 0 (b ∈ eqs)} 的极射线与线性空间

    Returns:
        (极射线列表, 线性空间基)
    """
    lineality: List[QVec] = [unit(dim, i) for i in range(dim)]
    rays: List[QVec] = []
    tight: List[FrozenSet[int]] = []
    constraints = [(tuple(b), True) for b in eqs] + [(tuple(a), False) for a in ineqs]

    for index, (a, is_eq) in enumerate(constraints):
        pivot = next((l for l in lineality if dot(a, l) != 0), None)
        if pivot is not None:
            ap = dot(a, pivot)
            new_lin = []
            for l in lineality:
                if l is pivot:
                    continue
                al = dot(a, l)
                new_lin.append(primitive(sub(l, scale(al / ap, pivot))) if al else l)
            new_rays = []
            for r in rays:
                ar = dot(a, r)
                new_rays.append(primitive(sub(r, scale(ar / ap, pivot))) if ar else r)
            tight = [z | {index} for z in tight]
            rays = new_rays
            lineality = new_lin
            if not is_eq:
                oriented = pivot if ap > 0 else scale(Fraction(-1), pivot)
                rays.append(primitive(oriented))
                tight.append(frozenset(range(index)))
            continue

        values = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(values) if v > 0]
        neg = [i for i, v in enumerate(values) if v < 0]
        zero = [i for i, v in enumerate(values) if v == 0]
        kept = zero if is_eq else pos + zero
        new_rays = [rays[i] for i in kept]
        new_tight = [tight[i] | {index} if values[i] == 0 else tight[i] for i in kept]
        for p in pos:
            for n in neg:
                common = tight[p] & tight[n]
                adjacent = True
                for k in range(len(rays)):
                    if k != p and k != n and common <= tight[k]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = sub(scale(values[p], rays[n]), scale(values[n], rays[p]))
                new_rays.append(primitive(combo))
                new_tight.append(common | {index})
        rays, tight = new_rays, new_tight

    # 去重
    unique: Dict[QVec, FrozenSet[int]] = {}
    for r, z in zip(rays, tight):
        unique.setdefault(r, z)
    return list(unique.keys()), lineality


def _homogenize(h: HPoly) -> Tuple[List[QVec], List[QVec]]:
    ineqs = [(Fraction(1),) + zeros(h.dim)]
    ineqs += [(-b,) + tuple(n) for n, b in h.inequalities]
    eqs = [(-b,) + tuple(n) for n, b in h.equalities]
    return ineqs, eqs


def _lex_key(row: Row):
    normal, offset = row
    return tuple(normal) + (offset,)


def hrep_to_vrep(h: HPoly) -> VPoly:
    """
    H表示转V表示(双描述法，按字典序插入约束)

    Args:
        h: H表示多面体

    Returns:
        VPoly: 极小顶点/射线表示
    """
    ordered = HPoly(h.dim, tuple(sorted(h.inequalities, key=_lex_key)),
                    tuple(sorted(h.equalities, key=_lex_key)))
    ineqs, eqs = _homogenize(ordered)
    rays, lineality = _dd_cone(ineqs, eqs, h.dim + 1)
    vertices = []
    directions = []
    for r in rays:
        if r[0] > 0:
            vertices.append(tuple(a / r[0] for a in r[1:]))
        else:
            directions.append(r[1:])
    for l in lineality:
        directions.append(tuple(l[1:]))
        directions.append(tuple(-a for a in l[1:]))
    if not vertices:
        raise InfeasibleError(f"不等式系统不可行(维数 {h.dim}，{len(h.inequalities)} 个不等式)")
    logger.debug("双描述法: %d 个约束 -> %d 个顶点, %d 条射线",
                 len(h.inequalities) + len(h.equalities), len(vertices), len(directions))
    return VPoly(h.dim, tuple(sorted(vertices)), tuple(directions))


def vrep_to_hrep(v: VPoly) -> HPoly:
    """
    V表示转H表示(对极锥做双描述)

    Args:
        v: V表示多面体

    Returns:
        HPoly: 无冗余的刻面不等式与等式
    """
    ineqs = [(Fraction(1),) + tuple(p) for p in v.vertices]
    ineqs += [(Fraction(0),) + tuple(r) for r in v.rays]
    rays, lineality = _dd_cone(ineqs, [], v.dim + 1)
    inequalities = []
    for r in rays:
        normal = r[1:]
        if is_zero(normal):
            continue
        inequalities.append((normal, -r[0]))
    equalities = [(tuple(l[1:]), -l[0]) for l in lineality if not is_zero(l[1:])]
    return HPoly(v.dim, tuple(inequalities), tuple(equalities)).canonical()


def to_vpoly(p: Polytope) -> VPoly:
    if isinstance(p, VPoly):
        return p
    if isinstance(p, QCone):
        return p.as_vpoly()
    return hrep_to_vrep(p)


def to_hpoly(p: Polytope) -> HPoly:
    if isinstance(p, HPoly):
        return p
    return vrep_to_hrep(to_vpoly(p))


def minimize(p: Polytope) -> VPoly:
    """极小V表示"""
    return hrep_to_vrep(to_hpoly(p))


def is_feasible(h: HPoly) -> bool:
    try:
        hrep_to_vrep(h)
    except InfeasibleError:
        return False
    return True


def dimension(p: Polytope) -> int:
    """仿射维数"""
    v = to_vpoly(p)
    return affine_rank(list(v.vertices), list(v.rays))


# ---------------------------------------------------------------------------
# 投影与截面
# ---------------------------------------------------------------------------

def _fourier_motzkin(h: HPoly, eliminate: List[int]) -> HPoly:
    """Fourier–Motzkin 消元(Chernikov规则过滤冗余组合)"""
    dim = h.dim
    rows = [(tuple(n), b, frozenset([i])) for i, (n, b) in enumerate(h.inequalities)]
    eqs = [(tuple(n), b) for n, b in h.equalities]
    eliminated = 0
    for var in eliminate:
        pivot_index = next((k for k, e in enumerate(eqs) if e[0][var] != 0), None)
        if pivot_index is not None:
            pn, pb = eqs[pivot_index]
            c = pn[var]

            def substitute(n, b):
                f = n[var] / c
                return sub(n, scale(f, pn)), b - f * pb

            eqs = [substitute(n, b) for k, (n, b) in enumerate(eqs) if k != pivot_index]
            rows = [substitute(n, b) + (hist,) for n, b, hist in rows]
            continue
        eliminated += 1
        pos = [r for r in rows if r[0][var] > 0]
        neg = [r for r in rows if r[0][var] < 0]
        new_rows = [r for r in rows if r[0][var] == 0]
        for pn, pb, ph in pos:
            for nn, nb, nh in neg:
                hist = ph | nh
                if len(hist) > eliminated + 1:
                    continue
                cp, cn = pn[var], -nn[var]
                normal = tuple(cn * a + cp * b for a, b in zip(pn, nn))
                new_rows.append((normal, cn * pb + cp * nb, hist))
        rows = new_rows
        logger.debug("Fourier–Motzkin 消去坐标 %d: 剩余 %d 行", var, len(rows))
    keep = [i for i in range(dim) if i not in eliminate]
    inequalities = [(tuple(n[i] for i in keep), b) for n, b, _ in rows]
    equalities = [(tuple(n[i] for i in keep), b) for n, b in eqs]
    return HPoly(len(keep), tuple(inequalities), tuple(equalities)).canonical()


def project(p: Polytope, kept_coordinates: Sequence[int]) -> Polytope:
    """
    坐标投影

    Args:
        p: H或V表示多面体
        kept_coordinates: 保留的坐标下标

    Returns:
        与输入同类型的投影像
    """
    kept = list(kept_coordinates)
    dim = p.dim
    if not kept or any(i < 0 or i >= dim for i in kept) or len(set(kept)) != len(kept):
        raise NOBodyError(f"投影坐标下标无效: {kept}")
    if isinstance(p, HPoly):
        eliminate = [i for i in range(dim) if i not in kept]
        projected = _fourier_motzkin(p, eliminate)
        # 重新排列为 kept 给出的顺序
        order = sorted(kept)
        perm = [order.index(i) for i in kept]
        permuted = HPoly(len(kept),
                         tuple((tuple(n[j] for j in perm), b) for n, b in projected.inequalities),
                         tuple((tuple(n[j] for j in perm), b) for n, b in projected.equalities))
        return vrep_to_hrep(hrep_to_vrep(permuted))
    v = to_vpoly(p)
    image = VPoly(len(kept),
                  tuple(tuple(x[i] for i in kept) for x in v.vertices),
                  tuple(r for r in (tuple(x[i] for i in kept) for x in v.rays) if not is_zero(r)))
    return minimize(image)


def slice(p: Polytope, axis: int, value) -> Optional[Polytope]:
    """
    截面 {x ∈ p : x[axis] = value}，嵌入剩余坐标

    Args:
        p: 多面体
        axis: 坐标轴
        value: 截取值

    Returns:
        与输入同类型的截面；为空时返回None
    """
    value = Fraction(value)
    h = to_hpoly(p)
    if axis < 0 or axis >= h.dim:
        raise NOBodyError(f"截面坐标轴无效: {axis}")

    def drop(n):
        return tuple(a for i, a in enumerate(n) if i != axis)

    try:
        sliced = HPoly(h.dim - 1,
                       tuple((drop(n), b - n[axis] * value) for n, b in h.inequalities),
                       tuple((drop(n), b - n[axis] * value) for n, b in h.equalities))
        v = hrep_to_vrep(sliced)
    except InfeasibleError:
        return None
    if isinstance(p, HPoly):
        return vrep_to_hrep(v)
    return v


# ---------------------------------------------------------------------------
# 体积
# ---------------------------------------------------------------------------

def _centroid(points: Sequence[QVec]) -> QVec:
    n = len(points)
    return tuple(sum(col, Fraction(0)) / n for col in zip(*points))


def volume(p: Polytope) -> Fraction:
    """
    精确体积：以各面的重心为锥顶做旗三角剖分

    Args:
        p: 有界多面体

    Returns:
        Fraction: 欧氏体积；低维输入返回0
    """
    v = to_vpoly(p)
    if v.rays:
        raise UnboundedError(f"多面体无界，无法计算体积(射线数 {len(v.rays)})")
    n = v.dim
    if affine_rank(list(v.vertices)) < n:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    if n == 1:
        xs = [x[0] for x in v.vertices]
        return max(xs) - min(xs)
    h = vrep_to_hrep(v)
    verts = list(hrep_to_vrep(h).vertices)
    facets = []
    for normal, offset in h.inequalities:
        facets.append(frozenset(i for i, x in enumerate(verts) if dot(normal, x) == offset))

    dims: Dict[FrozenSet[int], int] = {}

    def face_dim(face: FrozenSet[int]) -> int:
        if face not in dims:
            dims[face] = affine_rank([verts[i] for i in face])
        return dims[face]

    def subfaces(face: FrozenSet[int], k: int) -> List[FrozenSet[int]]:
        out = set()
        for g in facets:
            inter = face & g
            if inter and inter != face and face_dim(inter) == k - 1:
                out.add(inter)
        return sorted(out, key=lambda s: sorted(s))

    total = Fraction(0)

    def walk(face: FrozenSet[int], k: int, apexes: List[QVec]):
        nonlocal total
        apexes = apexes + [_centroid([verts[i] for i in face])]
        if k == 1:
            for vi in face:
                base = verts[vi]
                rows = [sub(c, base) for c in apexes]
                total += abs(det(rows))
            return
        for sf in subfaces(face, k):
            walk(sf, k - 1, apexes)

    apex = _centroid(verts)
    for facet in sorted(set(facets), key=lambda s: sorted(s)):
        walk(facet, n - 1, [apex])
    return total / factorial(n)


# ---------------------------------------------------------------------------
# 对偶锥与集合比较
# ---------------------------------------------------------------------------

def dual_cone(c: QCone, ambient_pairing: Optional[Sequence[Sequence]] = None) -> QCone:
    """
    对偶锥 {y : ⟨y, r⟩ ≥ 0 对所有射线r，⟨y, l⟩ = 0 对线性空间}

    Args:
        c: 有理锥
        ambient_pairing: 对称配对矩阵，默认单位阵

    Returns:
        QCone: 对偶锥(本原整数射线)
    """
    if ambient_pairing is None:
        gram = [unit(c.dim, i) for i in range(c.dim)]
    else:
        gram = [qvec(row) for row in ambient_pairing]
        if len(gram) != c.dim or any(len(row) != c.dim for row in gram):
            raise NOBodyError(f"配对矩阵尺寸与锥维数 {c.dim} 不符")
        if det(gram) == 0:
            raise DegeneratePairingError("配对矩阵退化，无法计算对偶锥")
    ineqs = [mat_vec(gram, r) for r in c.rays]
    eqs = [mat_vec(gram, l) for l in c.lineality]
    rays, lineality = _dd_cone(ineqs, eqs, c.dim)
    return QCone(c.dim, tuple(sorted(rays)), tuple(lineality))


def cone_to_hpoly(c: QCone, ambient_pairing: Optional[Sequence[Sequence]] = None) -> HPoly:
    """锥的H表示：以对偶锥生成元为法向量"""
    dual = dual_cone(c, ambient_pairing)
    gram = None if ambient_pairing is None else [qvec(r) for r in ambient_pairing]

    def normal(y):
        return y if gram is None else mat_vec(gram, y)

    ineqs = tuple((normal(r), Fraction(0)) for r in dual.rays)
    eqs = tuple((normal(l), Fraction(0)) for l in dual.lineality)
    return HPoly(c.dim, ineqs, eqs)


def cone_contains(c: QCone, point: Sequence[Fraction]) -> bool:
    """锥成员判定"""
    return cone_to_hpoly(c).contains(qvec(point))


def contains(p: Polytope, point: Sequence[Fraction]) -> bool:
    return to_hpoly(p).contains(qvec(point))


def equal_sets(p: Polytope, q: Polytope) -> bool:
    """
    两个凸集是否相等(互相包含：各自顶点与射线满足对方的不等式)

    Args:
        p: 多面体或锥
        q: 多面体或锥

    Returns:
        bool: 是否相等
    """
    if p.dim != q.dim:
        raise NOBodyError(f"维数不一致: {p.dim} != {q.dim}")
    pv, qv = to_vpoly(p), to_vpoly(q)
    ph, qh = to_hpoly(p), to_hpoly(q)
    for v, h in ((pv, qh), (qv, ph)):
        if not all(h.contains(x) for x in v.vertices):
            return False
        if not all(h.contains_direction(r) for r in v.rays):
            return False
    return True


def vertex_diff(p: Polytope, expected: Sequence[Sequence]) -> Dict[str, List[QVec]]:
    """
    与期望顶点列表比较，返回缺失和多余的顶点(诊断用)

    Args:
        p: 多面体
        expected: 期望顶点

    Returns:
        dict: {'missing': [...], 'extra': [...]}
    """
    actual = set(minimize(p).vertices)
    wanted = set(qvec(x) for x in expected)
    return {'missing': sorted(wanted - actual), 'extra': sorted(actual - wanted)}
