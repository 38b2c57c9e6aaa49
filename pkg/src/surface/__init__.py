"""
曲面模块

Néron–Severi 模型、Zariski 分解、一般无穷小 Newton–Okounkov 多边形与曲面构造器
"""

from .builders import (
    P2Blow7Cones,
    SymmetricSlice,
    blowup_point,
    build_p2blow7,
    p2blow7_symmetric_cones,
    p2blow7_symmetric_model,
    projective_plane,
    ruled_cones,
    ruled_surface,
    symmetric_slice,
    with_lines,
)
from .model import (
    Curve,
    Polarization,
    SurfaceDivisor,
    SurfaceModel,
    along,
    is_nef,
    is_pseudoeffective,
    load_surface,
    model_from_dict,
    mu_of,
    polarization,
)
from .nobody import beta_profile, graph_polygon, nobody_surface
from .zariski import (
    ZariskiDecomp,
    ZariskiGerm,
    ZariskiPiece,
    check_decomposition,
    next_breakpoint,
    zariski,
    zariski_germ,
    zariski_sweep,
)

__all__ = [
    'Curve', 'SurfaceModel', 'SurfaceDivisor', 'model_from_dict', 'load_surface', 'along',
    'is_nef', 'is_pseudoeffective', 'mu_of', 'Polarization', 'polarization',
    'ZariskiDecomp', 'ZariskiGerm', 'ZariskiPiece', 'zariski', 'zariski_germ', 'zariski_sweep',
    'next_breakpoint', 'check_decomposition',
    'beta_profile', 'graph_polygon', 'nobody_surface',
    'blowup_point', 'projective_plane', 'with_lines', 'ruled_surface', 'ruled_cones',
    'build_p2blow7', 'symmetric_slice', 'SymmetricSlice', 'p2blow7_symmetric_model',
    'p2blow7_symmetric_cones', 'P2Blow7Cones',
]
