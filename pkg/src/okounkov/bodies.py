"""
三维 Newton–Okounkov 体与四维粘合体

按塔数据中逐坐标的上下界 (账本的分段线性函数) 先组装H表示，再求V表示
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pwl import AffineForm, PwlExpr, concave_pieces, parse_affine, parse_pwl
from ratgeom import (
    HPoly,
    VPoly,
    equal_sets,
    is_feasible,
    minimize,
    polytope_to_dict,
    slice_polytope,
    volume,
)
from ratgeom.linalg import QVec, qvec, unit, zeros
from threefold import ModelFamily, family_tower, load_tower, normalize_kind
from threefold.families import TOWER_FILES
from threefold.tower import Tower
from utils.errors import ConsistencyError, DataFileError, MissingParameterError, UnsupportedFamilyError

logger = logging.getLogger(__name__)

Bound = Tuple[str, PwlExpr, PwlExpr]


@dataclass(frozen=True)
class NOBody:
    """
    Newton–Okounkov 体

    Args:
        dim: 维数 (3 或 4)
        vrep: 顶点表示
        hrep: 不等式表示
        variables: 坐标名，第一个坐标为 ν₁ (粘合体为 s)
        label: 来源说明
    """

    dim: int
    vrep: VPoly
    hrep: HPoly
    variables: Tuple[str, ...]
    label: str = ""

    @property
    def vertices(self) -> Tuple[QVec, ...]:
        return self.vrep.sorted().vertices

    def volume(self) -> Fraction:
        return volume(self.vrep)

    def contains(self, point: Sequence[Fraction]) -> bool:
        return self.hrep.contains(qvec(point))

    def slice(self, value, axis: int = 0) -> Optional[VPoly]:
        """固定一个坐标后的截面 (该坐标被去掉)"""
        section = slice_polytope(self.hrep, axis, value)
        if section is None:
            return None
        return minimize(section)

    def upper_volume(self, t) -> Fraction:
        """body ∩ {第一个坐标 ≥ t} 的体积"""
        h = self.hrep.with_inequality(unit(self.dim, 0), Fraction(t))
        if not is_feasible(h):
            return Fraction(0)
        return volume(h)

    def to_dict(self) -> Dict:
        payload = polytope_to_dict(self.vrep)
        payload["variables"] = list(self.variables)
        payload["label"] = self.label
        return payload


def check_body(body: NOBody) -> None:
    """
    两种表示给出同一集合；体在非负象限内且含原点

    Raises:
        ConsistencyError: 不满足
    """
    if not equal_sets(body.vrep, body.hrep):
        raise ConsistencyError(f"{body.label}: V表示与H表示不一致")
    negative = [v for v in body.vrep.vertices if any(a < 0 for a in v)]
    if negative:
        raise ConsistencyError(f"{body.label}: 顶点不在非负象限: {negative}")
    if not body.hrep.contains(zeros(body.dim)):
        raise ConsistencyError(f"{body.label}: 不含原点")


def _resolve_bound(tower: Tower, text: str, fixed: Mapping[str, Fraction],
                   substitute: Mapping[str, PwlExpr]) -> PwlExpr:
    expr = parse_pwl(str(text))
    used = expr.variables() & set(tower.ledger.names)
    if used:
        expr = expr.bind({name: tower.ledger.resolve(name) for name in used})
    if substitute:
        expr = expr.bind(substitute)
    return expr.substitute(fixed)


def bound_expressions(tower: Tower, rows: Sequence[Mapping], fixed: Mapping[str, Fraction],
                      substitute: Optional[Mapping[str, str]] = None) -> List[Bound]:
    """
    把数据中的上下界展开为只含坐标变量的表达式

    Args:
        tower: 爆破塔
        rows: [{"var", "lower", "upper"}, ...]
        fixed: 已固定的参数
        substitute: 参数替换，例如 {"a": "1 - s"}

    Returns:
        List[Bound]: (坐标名, 下界, 上界)
    """
    subs = {k: parse_pwl(str(v)) for k, v in (substitute or {}).items()}
    out = []
    for row in rows:
        try:
            name, lower, upper = row["var"], row["lower"], row["upper"]
        except KeyError as e:
            raise DataFileError(f"塔 {tower.family} 的界缺少字段: {str(e)}")
        out.append((name, _resolve_bound(tower, lower, fixed, subs), _resolve_bound(tower, upper, fixed, subs)))
    return out


def _pieces(expr: PwlExpr, domain: Optional[HPoly], variables: Sequence[str]) -> List[AffineForm]:
    extra = expr.variables() - set(variables)
    if extra:
        raise MissingParameterError(f"界 {expr} 含有未代入的参数: {sorted(extra)}")
    if not expr.variables():
        return [AffineForm.constant(expr.evaluate({}))]
    return concave_pieces(expr, domain, variables)


def assemble_hpoly(bounds: Sequence[Bound], variables: Sequence[str]) -> HPoly:
    """
    逐坐标组装：lower(前面的坐标) ≤ 坐标 ≤ upper(前面的坐标)

    上界须为凹函数、下界须为凸函数，按分支胞腔拆成仿射半空间

    Returns:
        HPoly: 规范化的H表示
    """
    variables = tuple(variables)
    if tuple(b[0] for b in bounds) != variables:
        raise DataFileError(f"界的坐标顺序 {[b[0] for b in bounds]} 与 {list(variables)} 不符")
    rows: List[Tuple[QVec, Fraction]] = []
    for k, (name, lower, upper) in enumerate(bounds):
        prev = variables[:k]
        domain = HPoly(k, tuple(rows)) if k else None
        new = []
        for form in _pieces(upper, domain, prev):
            coeffs, const = form.to_vector(prev)
            new.append((tuple(coeffs) + (Fraction(-1),), -const))
        for form in _pieces(-lower, domain, prev):
            coeffs, const = form.to_vector(prev)
            new.append((tuple(coeffs) + (Fraction(1),), -const))
        rows = [(tuple(n) + (Fraction(0),), b) for n, b in rows] + new
        logger.debug("坐标 %s: %d 个半空间", name, len(new))
    return HPoly(len(variables), tuple(rows)).canonical()


def _make_body(h: HPoly, variables: Sequence[str], label: str) -> NOBody:
    body = NOBody(h.dim, minimize(h).sorted(), h, tuple(variables), label)
    logger.info("%s: %d 维体, %d 个顶点, %d 个面", label, body.dim, len(body.vrep.vertices), len(h.inequalities))
    return body


@lru_cache(maxsize=128)
def body(family: ModelFamily) -> NOBody:
    """
    一般无穷小 Newton–Okounkov 体 (t, x, y)

    Args:
        family: 模型族

    Returns:
        NOBody: 三维体
    """
    tower = family_tower(family)
    if not tower.body:
        raise DataFileError(f"塔 {tower.family} 没有体的描述")
    variables = tuple(tower.body["variables"])
    bounds = bound_expressions(tower, tower.body["bounds"], family.values)
    return _make_body(assemble_hpoly(bounds, variables), variables, family.label())


def glue_tower(kind: str) -> Tower:
    kind = normalize_kind(kind)
    tower = load_tower(TOWER_FILES[kind])
    if not tower.glue:
        raise UnsupportedFamilyError(f"{kind} 没有四维粘合体")
    return tower


@lru_cache(maxsize=None)
def glue4d(kind: str) -> NOBody:
    """
    参数 s 跑遍 [0, 1] 时各三维体粘成的四维体 (s, t, x, y)

    Args:
        kind: CxP2 (a = 1 - s, b = s) 或 CxJac

    Returns:
        NOBody: 四维体
    """
    tower = glue_tower(kind)
    glue = tower.glue
    param = glue["parameter"]
    variables = (param,) + tuple(tower.body["variables"])
    rows = [{"var": param, "lower": glue["lower"], "upper": glue["upper"]}] + list(tower.body["bounds"])
    bounds = bound_expressions(tower, rows, {}, glue.get("substitute"))
    return _make_body(assemble_hpoly(bounds, variables), variables, f"{tower.family} glue")


def glue_family(kind: str, s) -> ModelFamily:
    """粘合参数 s 对应的模型族"""
    tower = glue_tower(kind)
    s = Fraction(s)
    env = {tower.glue["parameter"]: s}
    substitute = tower.glue.get("substitute") or {}
    if substitute:
        params = {k: parse_pwl(str(v)).evaluate(env) for k, v in substitute.items()}
    else:
        params = env
    return ModelFamily(tower.family, tuple((k, params[k]) for k in tower.parameters))


def _final_rows() -> Tuple[Tuple[str, ...], List[Tuple[QVec, Fraction]]]:
    """
    塔数据中 C×Jac 的最终不等式组

    Returns:
        (变量 (s, t, x, z), 行列表)：每行 (系数, 常数) 含义 系数·(s,t,x,z) + 常数 ≥ 0
    """
    tower = glue_tower("CxJac")
    texts = tower.body.get("final_inequalities")
    if not texts:
        raise DataFileError(f"塔 {tower.family} 没有最终不等式组")
    variables = (tower.glue["parameter"],) + tuple(tower.body["variables"])
    return variables, [parse_affine(text).to_vector(variables) for text in texts]


def final_inequalities_cxjac(s) -> HPoly:
    """
    固定 s 时 C×Jac 体的闭式不等式组 (t, x, z)

    0 ≤ x ≤ 1 - s, 0 ≤ z ≤ min{9e - 81x/8, 3s/2 - 9x/8, t - x, 1 - s + 8e - 10x}，e = 1 + s/2 - t
    """
    s = Fraction(s)
    _, forms = _final_rows()
    rows = tuple((coeffs[1:], -(const + coeffs[0] * s)) for coeffs, const in forms)
    return HPoly(3, rows).canonical()


def final_inequalities_cxjac_4d() -> HPoly:
    """同一不等式组，s 作为第一个坐标，0 ≤ s ≤ 1"""
    _, forms = _final_rows()
    rows = [((Fraction(1), Fraction(0), Fraction(0), Fraction(0)), Fraction(0)),
            ((Fraction(-1), Fraction(0), Fraction(0), Fraction(0)), Fraction(-1))]
    rows += [(coeffs, -const) for coeffs, const in forms]
    return HPoly(4, tuple(rows)).canonical()
