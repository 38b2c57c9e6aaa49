"""
三维模型族模块

C×P²、三条曲线的乘积与 C×Jac 的爆破塔、闭式 σ-分解、体积与锥
"""

from .cones import ConeData, check_thresholds, cones, thresholds
from .families import FAMILY_PARAMETERS, ModelFamily, ccc, cxjac, cxp2, normalize_kind, validate_params
from .sigma import (
    Divisor3,
    NefVerdict,
    NegativeCertificate,
    SigmaDecomp3,
    VolumePiece,
    check_pushforward,
    closed_form_volume,
    mu,
    negative_part_certificates,
    psigma,
    stage_psigma,
    verify_nef3,
    verify_psigma_nef,
    vol_ray,
    volume_breakpoints,
    volume_curve,
    volume_pieces,
)
from .tower import (
    Component,
    ExceptionalDivisor,
    Tower,
    TowerStage,
    check_tower,
    exceptional_cube,
    family_tower,
    load_tower,
    stage_env,
    tower_from_dict,
)


def triple(stage: TowerStage, d1, d2, d3):
    """(D1·D2·D3)"""
    return stage.triple(d1, d2, d3)


def curve_dot(stage: TowerStage, d, label: str):
    """D·C"""
    return stage.curve_dot(d, label)


__all__ = [
    'ModelFamily', 'FAMILY_PARAMETERS', 'cxp2', 'ccc', 'cxjac', 'normalize_kind', 'validate_params',
    'Component', 'TowerStage', 'Tower', 'ExceptionalDivisor', 'load_tower', 'tower_from_dict', 'family_tower',
    'check_tower', 'exceptional_cube', 'stage_env', 'triple', 'curve_dot',
    'Divisor3', 'SigmaDecomp3', 'psigma', 'stage_psigma', 'check_pushforward', 'mu',
    'vol_ray', 'closed_form_volume', 'VolumePiece', 'volume_breakpoints', 'volume_pieces', 'volume_curve',
    'NegativeCertificate', 'negative_part_certificates', 'NefVerdict', 'verify_nef3', 'verify_psigma_nef',
    'ConeData', 'cones', 'thresholds', 'check_thresholds',
]
