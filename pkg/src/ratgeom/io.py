"""
多面体序列化

JSON(有理数写作 ["num","den"] 十进制字符串对)与 OFF 三维网格导出
"""

import json
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from utils.errors import DataFileError, NOBodyError
from utils.helpers import rational_from_json, rational_to_json

from .linalg import QVec, cross3, dot, sub
from .polytope import HPoly, VPoly, minimize, to_hpoly, to_vpoly


def polytope_to_dict(p: Union[HPoly, VPoly]) -> Dict:
    """
    同时导出两种表示

    Args:
        p: 多面体

    Returns:
        dict: JSON可序列化字典
    """
    v = minimize(p) if isinstance(p, HPoly) else p.sorted()
    h = to_hpoly(v).canonical()
    return {
        "dim": v.dim,
        "vertices": [[rational_to_json(a) for a in x] for x in v.vertices],
        "rays": [[rational_to_json(a) for a in r] for r in v.rays],
        "inequalities": [{"normal": [rational_to_json(a) for a in n], "offset": rational_to_json(b)}
                         for n, b in h.inequalities],
        "equalities": [{"normal": [rational_to_json(a) for a in n], "offset": rational_to_json(b)}
                       for n, b in h.equalities],
    }


def polytope_to_json(p: Union[HPoly, VPoly]) -> str:
    return json.dumps(polytope_to_dict(p), indent=2, sort_keys=True)


def polytope_from_dict(payload: Dict) -> VPoly:
    """
    从JSON字典读取多面体(优先使用顶点，否则使用不等式)

    Args:
        payload: polytope_to_dict 的输出格式

    Returns:
        VPoly: 多面体
    """
    try:
        dim = int(payload["dim"])
        vertices = [tuple(rational_from_json(a) for a in x) for x in payload.get("vertices", [])]
        rays = [tuple(rational_from_json(a) for a in r) for r in payload.get("rays", [])]
        if vertices or rays:
            return VPoly(dim, tuple(vertices), tuple(rays))
        ineqs = tuple((tuple(rational_from_json(a) for a in row["normal"]), rational_from_json(row["offset"]))
                      for row in payload.get("inequalities", []))
        eqs = tuple((tuple(rational_from_json(a) for a in row["normal"]), rational_from_json(row["offset"]))
                    for row in payload.get("equalities", []))
        return to_vpoly(HPoly(dim, ineqs, eqs))
    except (KeyError, TypeError) as e:
        raise DataFileError(f"多面体JSON格式错误: {str(e)}")


def _order_facet(points: List[tuple], normal: tuple) -> List[int]:
    """按环绕法向量的角度顺序排列面上的顶点(精确比较，无浮点)"""
    center = tuple(sum(c, Fraction(0)) / len(points) for c in zip(*points))
    base = sub(points[0], center)
    other = cross3(normal, base)

    def key(i):
        d = sub(points[i], center)
        x, y = dot(d, base), dot(d, other)
        # 按象限加斜率排序
        half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
        return half, _slope_key(x, y, half)

    return sorted(range(len(points)), key=key)


class _slope_key:
    """半平面内按极角比较两点(叉积符号)"""

    def __init__(self, x, y, half):
        self.x, self.y, self.half = x, y, half

    def __lt__(self, other):
        return self.x * other.y - self.y * other.x > 0

    def __eq__(self, other):
        return self.x * other.y - self.y * other.x == 0


def boundary_triangles(p: Union[HPoly, VPoly]) -> Tuple[List[QVec], List[Tuple[int, int, int]]]:
    """
    三维有界多面体的边界三角化

    Args:
        p: 三维多面体

    Returns:
        (顶点列表, 三角形顶点下标列表)，各面按逆时针扇形剖分
    """
    v = minimize(p)
    if v.dim != 3:
        raise NOBodyError(f"边界三角化仅支持三维多面体: dim={v.dim}")
    if v.rays:
        raise NOBodyError("边界三角化要求有界多面体")
    verts = list(v.vertices)
    h = to_hpoly(v)
    triangles = []
    for normal, offset in h.inequalities:
        face = [i for i, x in enumerate(verts) if dot(normal, x) == offset]
        if len(face) < 3:
            continue
        order = _order_facet([verts[i] for i in face], normal)
        ring = [face[k] for k in order]
        for k in range(1, len(ring) - 1):
            triangles.append((ring[0], ring[k], ring[k + 1]))
    return verts, triangles


def polytope_to_off(p: Union[HPoly, VPoly]) -> str:
    """
    导出三维有界多面体为OFF格式

    Args:
        p: 三维多面体

    Returns:
        str: OFF文本
    """
    verts, triangles = boundary_triangles(p)
    lines = ["OFF", f"{len(verts)} {len(triangles)} 0"]
    for x in verts:
        lines.append(" ".join(_off_number(a) for a in x))
    for tri in triangles:
        lines.append("3 " + " ".join(str(i) for i in tri))
    return "\n".join(lines) + "\n"


def _off_number(a: Fraction) -> str:
    if a.denominator == 1:
        return str(a.numerator)
    return repr(float(a))
