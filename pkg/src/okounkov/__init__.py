"""
Newton–Okounkov 体模块

由塔数据组装三维体与四维粘合体，载体曲面上的截面，曲线类 Seshadri 常数
"""

from .bodies import (
    NOBody,
    assemble_hpoly,
    body,
    bound_expressions,
    check_body,
    final_inequalities_cxjac,
    final_inequalities_cxjac_4d,
    glue4d,
    glue_family,
)
from .seshadri import AreaVerdict, GeneratorBound, generator_bounds, projection_area_check, seshadri_curve
from .slices import (
    Carrier,
    CarrierCorrection,
    SlicePolygon,
    carrier,
    carrier_class,
    carrier_corrections,
    slice_area_curve,
    slice_at,
)

__all__ = [
    'NOBody', 'body', 'glue4d', 'glue_family', 'check_body', 'assemble_hpoly', 'bound_expressions',
    'final_inequalities_cxjac', 'final_inequalities_cxjac_4d',
    'SlicePolygon', 'slice_at', 'slice_area_curve', 'Carrier', 'carrier', 'carrier_class',
    'CarrierCorrection', 'carrier_corrections',
    'GeneratorBound', 'generator_bounds', 'seshadri_curve', 'AreaVerdict', 'projection_area_check',
]
