"""
第一级爆破上的有效锥、可动锥与 nef 锥

生成元来自塔数据；成员判定与阈值 μ、ν、ε 由锥的H表示求得
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from pwl import parse_pwl
from ratgeom import HPoly, QCone, cone_to_hpoly
from ratgeom.linalg import QVec, dot, qvec
from utils.errors import ConsistencyError, ParameterRangeError, UnboundedError, UnsupportedFamilyError

from .families import ModelFamily
from .tower import family_tower

logger = logging.getLogger(__name__)

CONE_KINDS = ("eff", "mov", "nef")
THRESHOLD_NAMES = {"eff": "mu", "mov": "nu", "nef": "epsilon"}


@dataclass(frozen=True)
class ConeData:
    """
    某一级上的锥

    Args:
        family: 模型族
        stage: 级名
        generators: 锥种类 -> (公式, 类)
        cones: 锥种类 -> QCone
    """

    family: ModelFamily
    stage: str
    generators: Dict[str, Tuple[Tuple[str, QVec], ...]]
    cones: Dict[str, QCone]
    _hpolys: Dict[str, HPoly] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def inequalities(self, kind: str) -> HPoly:
        """锥的H表示，不等式 n·x ≥ 0"""
        if kind not in self.cones:
            raise UnsupportedFamilyError(f"{self.family.label()} 没有 {kind} 锥")
        if kind not in self._hpolys:
            self._hpolys[kind] = cone_to_hpoly(self.cones[kind])
        return self._hpolys[kind]

    def contains(self, kind: str, d: Sequence[Fraction]) -> bool:
        return self.inequalities(kind).contains(qvec(d))


def cones(family: ModelFamily) -> ConeData:
    """
    第一级爆破上的锥

    Args:
        family: CxP2 或 CxJac

    Returns:
        ConeData: 有效、可动、nef 锥
    """
    tower = family_tower(family)
    stage = tower.stages[0]
    if not stage.cones:
        raise UnsupportedFamilyError(f"{family.kind} 不提供第一级的锥生成元")
    generators: Dict[str, Tuple[Tuple[str, QVec], ...]] = {}
    result: Dict[str, QCone] = {}
    for kind in CONE_KINDS:
        texts = stage.cones.get(kind)
        if not texts:
            continue
        gens = tuple((text, stage.parse_class(text)) for text in texts)
        generators[kind] = gens
        result[kind] = QCone(stage.rank, tuple(cls for _, cls in gens))
    return ConeData(family, stage.name, generators, result)


def _extreme_t(h: HPoly, start: QVec, direction: QVec) -> Fraction:
    """最大的 t 使 start - t·direction 满足 h"""
    if not h.contains(start):
        raise ParameterRangeError(f"起点 {start} 不在锥内")
    for normal, _ in h.equalities:
        if dot(normal, direction) != 0:
            return Fraction(0)
    bound: Optional[Fraction] = None
    for normal, _ in h.inequalities:
        slope = dot(normal, direction)
        if slope > 0:
            value = dot(normal, start) / slope
            bound = value if bound is None else min(bound, value)
    if bound is None:
        raise UnboundedError(f"方向 {direction} 上阈值无界")
    return bound


def thresholds(family: ModelFamily) -> Dict[str, Fraction]:
    """
    沿 L_t = π*L - t·E 离开各锥的 t

    Returns:
        Dict[str, Fraction]: {"mu": ..., "nu": ..., "epsilon": ...}
    """
    data = cones(family)
    tower = family_tower(family)
    stage = tower.stage(data.stage)
    env = dict(family.env(0))
    start = stage.parse_class(stage.polarization, env)
    exceptional = stage.class_named(tower.carrier.get("exceptional", "E"))
    out = {}
    for kind in data.cones:
        out[THRESHOLD_NAMES[kind]] = _extreme_t(data.inequalities(kind), start, exceptional)
    return out


def check_thresholds(family: ModelFamily) -> Dict[str, Fraction]:
    """
    阈值与塔数据中的闭式比较

    Raises:
        ConsistencyError: 不一致
    """
    tower = family_tower(family)
    computed = thresholds(family)
    for name, formula in tower.invariants.items():
        if name not in computed:
            continue
        expected = parse_pwl(formula).evaluate(family.env())
        if computed[name] != expected:
            raise ConsistencyError(f"{family.label()}: {name} = {computed[name]}，闭式为 {expected}")
    return computed
