"""
精确有理多面体内核

提供H/V表示转换、对偶锥、投影、截面、体积与集合相等判定
"""

from .io import boundary_triangles, polytope_from_dict, polytope_to_dict, polytope_to_json, polytope_to_off
from .linalg import QVec, Rat, qvec
from .polytope import (
    HPoly,
    QCone,
    VPoly,
    cone_contains,
    cone_to_hpoly,
    contains,
    dimension,
    dual_cone,
    equal_sets,
    hrep_to_vrep,
    is_feasible,
    minimize,
    project,
    slice,
    to_hpoly,
    to_vpoly,
    vertex_diff,
    volume,
    vrep_to_hrep,
)

slice_polytope = slice

__all__ = [
    'Rat', 'QVec', 'qvec', 'HPoly', 'VPoly', 'QCone',
    'hrep_to_vrep', 'vrep_to_hrep', 'to_hpoly', 'to_vpoly', 'minimize', 'is_feasible', 'dimension',
    'project', 'slice', 'slice_polytope', 'volume', 'dual_cone', 'cone_to_hpoly', 'cone_contains',
    'contains', 'equal_sets', 'vertex_diff',
    'polytope_to_dict', 'polytope_to_json', 'polytope_from_dict', 'polytope_to_off', 'boundary_triangles',
]
