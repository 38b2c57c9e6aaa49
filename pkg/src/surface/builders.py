"""
曲面构造器

点爆破、射影丛直纹面，以及 P² 上七点、再六点、再六点的三级爆破与其 S6 对称切片
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

from pwl import linear_coefficients
from ratgeom import HPoly, QCone, dual_cone, hrep_to_vrep
from ratgeom.linalg import QVec, bilinear, mat_vec, primitive, solve, transpose
from utils.errors import DataFileError, NOBodyError, ParameterRangeError

from .model import Curve, SurfaceModel, model_from_dict

logger = logging.getLogger(__name__)


def _pad(cls: Sequence[Fraction], extra: int = 1) -> QVec:
    return tuple(cls) + (Fraction(0),) * extra


def blowup_point(model: SurfaceModel, multiplicities: Mapping[str, int], new_name: str) -> SurfaceModel:
    """
    在一点爆破曲面

    Args:
        model: 原模型
        multiplicities: 经过该点的曲线及其重数
        new_name: 例外曲线名

    Returns:
        SurfaceModel: 新模型；基末尾加入 e，e² = -1，与拉回类正交
    """
    names = {c.name for c in model.curves}
    unknown = [k for k in multiplicities if k not in names]
    if unknown:
        raise NOBodyError(f"模型 {model.name} 中没有曲线: {unknown}")
    if new_name in names or new_name in model.basis:
        raise NOBodyError(f"名称 {new_name} 已存在")
    if any(m < 0 for m in multiplicities.values()):
        raise ParameterRangeError(f"重数必须非负: {dict(multiplicities)}")

    n = model.rank
    pairing = [_pad(row) for row in model.pairing]
    pairing.append((Fraction(0),) * n + (Fraction(-1),))
    e = (Fraction(0),) * n + (Fraction(1),)

    curves: List[Curve] = []
    for c in model.curves:
        cls = _pad(c.cls)
        m = multiplicities.get(c.name, 0)
        if m:
            cls = cls[:-1] + (Fraction(-m),)
        curves.append(Curve(c.name, cls, bilinear(pairing, cls, cls) >= 0))
    curves.append(Curve(new_name, e, False))
    transformed = {c.name: c.cls for c in curves}

    def carry(gens):
        # 经过该点的生成元取严格变换，其余取拉回
        if not gens:
            return ()
        out = [(k, transformed[k] if k in multiplicities else _pad(v)) for k, v in gens]
        seen = {k for k, _ in out}
        out += [(k, transformed[k]) for k, m in multiplicities.items() if m and k not in seen]
        return tuple(out) + ((new_name, e),)

    return SurfaceModel(
        name=f"{model.name}+{new_name}",
        basis=model.basis + (new_name,),
        pairing=tuple(pairing),
        curves=tuple(curves),
        mori=carry(model.mori),
        effective=carry(model.effective),
        named=tuple((k, _pad(v)) for k, v in model.named),
        metadata=dict(model.metadata),
    )


def projective_plane() -> SurfaceModel:
    """P²：基 (h,)，h² = 1"""
    h = (Fraction(1),)
    return SurfaceModel(name="P2", basis=("h",), pairing=((Fraction(1),),),
                        mori=(("line", h),), effective=(("line", h),))


def with_lines(model: SurfaceModel, names: Sequence[str]) -> SurfaceModel:
    """给 P² 模型加入若干条直线(辅助检验曲线)"""
    line = tuple(Fraction(1) if b == "h" else Fraction(0) for b in model.basis)
    extra = tuple(Curve(name, line, True) for name in names)
    return SurfaceModel(model.name, model.basis, model.pairing, model.curves + extra,
                        model.mori, model.effective, model.named, dict(model.metadata))


def ruled_surface(genus_label: str, d1: int, d2: int) -> SurfaceModel:
    """
    曲线上秩2丛的射影化，丛的两个线丛次数为 d1 ≥ d2

    Args:
        genus_label: 底曲线标签，例如 "g2"
        d1: 较大次数
        d2: 较小次数

    Returns:
        SurfaceModel: 基 (xi, f)，ξ² = d1 + d2，ξ·f = 1，f² = 0；
            有效锥 ⟨ξ - d1·f, f⟩，nef 锥 ⟨ξ - d2·f, f⟩
    """
    d1, d2 = int(d1), int(d2)
    if d1 < d2:
        raise ParameterRangeError(f"直纹面次数要求 d1 ≥ d2，实际 ({d1}, {d2})")
    pairing = ((Fraction(d1 + d2), Fraction(1)), (Fraction(1), Fraction(0)))
    section = (Fraction(1), Fraction(-d1))
    fiber = (Fraction(0), Fraction(1))
    curves = (Curve("section", section, d1 == d2), Curve("f", fiber, True))
    gens = (("section", section), ("f", fiber))
    return SurfaceModel(
        name=f"ruled_{genus_label}_{d1}_{d2}",
        basis=("xi", "f"),
        pairing=pairing,
        curves=curves,
        mori=gens,
        effective=gens,
        named=(("nef_section", (Fraction(1), Fraction(-d2))),),
        metadata={"genus": genus_label, "degrees": (d1, d2)},
    )


def ruled_cones(model: SurfaceModel) -> Tuple[QCone, QCone]:
    """(有效锥, nef 锥)，后者为前者关于交配对的对偶"""
    eff = QCone(model.rank, tuple(cls for _, cls in model.effective)).normalized()
    return eff, model.nef_cone.normalized()


# ---------------------------------------------------------------------------
# 七点配置
# ---------------------------------------------------------------------------

def _load_payload(loader=None) -> Dict:
    if loader is None:
        from data_processing.data_loader import DataLoader
        loader = DataLoader()
    return loader.load_surface("p2blow7_tower")


def build_p2blow7(loader=None) -> SurfaceModel:
    """
    按数据文件中的步骤依次爆破，得到20维模型

    Returns:
        SurfaceModel: 基 (h, e1..e7, g1..g6, n1..n6) 的模型
    """
    payload = _load_payload(loader)
    model = model_from_dict({k: v for k, v in payload.items() if k not in ("steps", "symmetric")})
    for step in payload.get("steps", []):
        try:
            model = blowup_point(model, step["through"], step["new"])
        except KeyError as e:
            raise DataFileError(f"p2blow7_tower 爆破步骤缺少字段: {str(e)}")
    logger.debug("七点配置: 秩 %d, %d 条曲线", model.rank, len(model.curves))
    return model


@dataclass(frozen=True)
class SymmetricSlice:
    """
    对称子空间切片

    Args:
        basis: 对称基名 (L, E, E7, G, N)
        embedding: 各对称基元素(曲线轨道和)在20维基下的类
        pairing: 对称基上的交配对
        ambient: 20维模型
    """

    basis: Tuple[str, ...]
    embedding: Tuple[QVec, ...]
    pairing: Tuple[QVec, ...]
    ambient: SurfaceModel

    def lift(self, y: Sequence[Fraction]) -> QVec:
        return mat_vec(transpose(self.embedding), y)

    def project(self, x: Sequence[Fraction]) -> QVec:
        """对称化：关于交配对的正交投影"""
        rhs = [self.ambient.dot(b, x) for b in self.embedding]
        y = solve(self.pairing, rhs)
        if y is None:
            raise NOBodyError("对称基上的交配对退化")
        return y


def _orbit_class(ambient: SurfaceModel, names: Sequence[str]) -> QVec:
    total = tuple(Fraction(0) for _ in range(ambient.rank))
    for name in names:
        total = tuple(a + b for a, b in zip(total, ambient.curve(name).cls))
    return total


def symmetric_slice(loader=None) -> SymmetricSlice:
    """20维模型与其 S6 不变子空间"""
    payload = _load_payload(loader)
    sym = payload.get("symmetric")
    if not sym:
        raise DataFileError("p2blow7_tower 缺少 symmetric 段")
    ambient = build_p2blow7(loader)
    embedding = tuple(_orbit_class(ambient, sym["orbits"][name]) for name in sym["basis"])
    pairing = tuple(tuple(ambient.dot(a, b) for b in embedding) for a in embedding)
    return SymmetricSlice(tuple(sym["basis"]), embedding, pairing, ambient)


def p2blow7_symmetric_model(loader=None) -> SurfaceModel:
    """
    对称切片上的曲面模型：曲线、Mori 与有效生成元都是曲线轨道和

    Returns:
        SurfaceModel: 基 (L, E, E7, G, N)
    """
    if loader is None:
        return _cached_symmetric_model()
    return _symmetric_model(loader)


@lru_cache(maxsize=None)
def _cached_symmetric_model() -> SurfaceModel:
    return _symmetric_model(None)


def _symmetric_model(loader) -> SurfaceModel:
    sym = _load_payload(loader)["symmetric"]
    sl = symmetric_slice(loader)
    curves = []
    for name, members in sym["orbits"].items():
        cls = sl.project(_orbit_class(sl.ambient, members))
        curves.append(Curve(name, cls, bilinear(sl.pairing, cls, cls) >= 0))
    named = tuple((name, tuple(c.evaluate({}) for c in linear_coefficients(text, sl.basis)))
                  for name, text in sym.get("named", {}).items())
    gens = tuple((c.name, c.cls) for c in curves)
    return SurfaceModel(
        name="p2blow7_symmetric",
        basis=sl.basis,
        pairing=sl.pairing,
        curves=tuple(curves),
        mori=gens,
        effective=gens,
        named=named,
    )


@dataclass(frozen=True)
class P2Blow7Cones:
    """对称切片上的锥数据与交数表"""

    pairing: Tuple[QVec, ...]
    nef_ineqs: HPoly
    nef_gens: Tuple[Tuple[str, QVec], ...]
    eff_gens: Tuple[Tuple[str, QVec], ...]
    row_names: Tuple[str, ...]
    column_names: Tuple[str, ...]
    intersection_table: Tuple[Tuple[Fraction, ...], ...]

    def table_entry(self, row: str, column: str) -> Fraction:
        return self.intersection_table[self.row_names.index(row)][self.column_names.index(column)]


def _label(cls: QVec, catalogue: Mapping[str, QVec]) -> str:
    for name, ref in catalogue.items():
        if primitive(ref) == primitive(cls):
            return name
    return str(tuple(str(a) for a in cls))


@lru_cache(maxsize=None)
def _cached_cones() -> P2Blow7Cones:
    return _compute_cones(None)


def p2blow7_symmetric_cones(loader=None) -> P2Blow7Cones:
    """
    对称切片上的 nef 不等式、有效/nef 生成元与8×7交数表

    nef 条件由与检验曲线 (L, l1, e1, e7, g1, n1) 在20维模型中的交数求得；
    nef 生成元来自不等式的双描述，有效生成元是 nef 锥关于对称交配对的对偶

    Returns:
        P2Blow7Cones: 锥数据
    """
    if loader is None:
        return _cached_cones()
    return _compute_cones(loader)


def _compute_cones(loader) -> P2Blow7Cones:
    sym = _load_payload(loader)["symmetric"]
    sl = symmetric_slice(loader)
    model = p2blow7_symmetric_model(loader)
    amb = sl.ambient

    rows = []
    for name in sym["nef_tests"]:
        c = amb.curve(name).cls
        rows.append((tuple(amb.dot(b, c) for b in sl.embedding), Fraction(0)))
    nef_ineqs = HPoly(len(sl.basis), tuple(rows))

    catalogue: Dict[str, QVec] = {c.name: c.cls for c in model.curves}
    catalogue.update(dict(model.named))
    nef_rays = sorted(set(primitive(r) for r in hrep_to_vrep(nef_ineqs).rays))
    nef_gens = tuple((_label(r, catalogue), r) for r in nef_rays)
    eff = dual_cone(QCone(len(sl.basis), tuple(nef_rays)), sl.pairing)
    eff_gens = tuple((_label(r, catalogue), r) for r in eff.rays)

    row_names = tuple(sym["table_rows"])
    column_names = tuple(sym["table_columns"])
    table = tuple(
        tuple(bilinear(sl.pairing, catalogue[r], catalogue[c]) for c in column_names)
        for r in row_names
    )
    logger.debug("七点对称切片: %d 个 nef 生成元, %d 个有效生成元", len(nef_gens), len(eff_gens))
    return P2Blow7Cones(sl.pairing, nef_ineqs, nef_gens, eff_gens, row_names, column_names, table)
