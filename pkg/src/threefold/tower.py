"""
爆破塔

从数据文件加载各级的除子基、素分量曲面与限制映射，计算三重交数、曲线交数与推出
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pwl import Ledger, PwlExpr, linear_coefficients, parse_pwl
from ratgeom.linalg import QVec, combine, qvec, solve, unit
from surface import (
    SurfaceModel,
    load_surface,
    model_from_dict,
    p2blow7_symmetric_model,
    projective_plane,
    ruled_surface,
)
from utils.errors import ConsistencyError, DataFileError, MissingParameterError, NOBodyError
from utils.helpers import parse_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Component:
    """
    塔某一级的素分量

    Args:
        name: 分量名
        cls: 分量在该级基下的类
        surface: 分量(的解消)的曲面模型
        restriction: 每个基元素限制到分量上的类
        curve_labels: 曲面曲线名到塔中曲线标签的对应
    """

    name: str
    cls: QVec
    surface: SurfaceModel
    restriction: Tuple[QVec, ...]
    curve_labels: Tuple[Tuple[str, str], ...] = ()

    def restrict(self, d: Sequence[Fraction]) -> QVec:
        """D|_Y = Σ dᵢ·(Bᵢ|_Y)"""
        return combine(qvec(d), self.restriction, self.surface.rank)

    def label(self, curve_name: str) -> str:
        return dict(self.curve_labels).get(curve_name, f"{self.name}:{curve_name}")


@dataclass(frozen=True)
class TowerStage:
    """
    塔的一级

    Args:
        name: 级名
        basis: 除子基
        named: 具名类 (名称, 以基表示的公式)
        polarization: L_t 的公式
        positive_part: P_σ(L_t) 的闭式公式
        components: 素分量
        parent: 上一级名
        pushforward: 每个基元素推出到上一级的类
    """

    name: str
    basis: Tuple[str, ...]
    named: Tuple[Tuple[str, str], ...]
    polarization: str
    positive_part: str
    components: Tuple[Component, ...]
    parent: Optional[str] = None
    pushforward: Tuple[QVec, ...] = ()
    nef_classes: Tuple[str, ...] = ()
    cones: Dict[str, Tuple[str, ...]] = field(default_factory=dict, compare=False, hash=False)
    curves: Tuple[Tuple[str, str, str], ...] = ()
    _parsed: Dict[str, List[PwlExpr]] = field(default_factory=dict, compare=False, hash=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, hash=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _named_texts(self) -> Dict[str, str]:
        texts = {k: v for k, v in self.named if k not in self.basis}
        for comp in self.components:
            if comp.name in self.basis or comp.name in texts:
                continue
            texts[comp.name] = " + ".join(f"({a})*{b}" for a, b in zip(comp.cls, self.basis) if a) or "0"
        return texts

    def parametric_class(self, text: str) -> List[PwlExpr]:
        """类公式在基下的系数(参数的分段线性函数)"""
        # 检查层并行时多个线程共享同一级
        with self._lock:
            if text not in self._parsed:
                self._parsed[text] = linear_coefficients(text, self.basis, self._named_texts())
            return self._parsed[text]

    def parse_class(self, text: str, env: Optional[Mapping] = None) -> QVec:
        """
        解析类公式并求值

        Args:
            text: 例如 "m*fbar + b*Hbar + tau*E - u*G"
            env: 参数与账本取值

        Returns:
            QVec: 基坐标
        """
        return tuple(c.evaluate(env or {}) for c in self.parametric_class(text))

    def class_named(self, name: str) -> QVec:
        if name in self.basis:
            return unit(self.rank, self.basis.index(name))
        return self.parse_class(name)

    def component(self, name: str) -> Component:
        for comp in self.components:
            if comp.name == name:
                return comp
        raise MissingParameterError(f"级 {self.name} 中没有分量 {name}")

    def component_coordinates(self, d: Sequence[Fraction]) -> QVec:
        """
        把类写成素分量的线性组合

        Returns:
            QVec: 各分量的系数，顺序同 components
        """
        matrix = [[comp.cls[i] for comp in self.components] for i in range(self.rank)]
        coords = solve(matrix, qvec(d))
        if coords is None:
            raise NOBodyError(f"级 {self.name} 的素分量不构成基")
        return coords

    def triple(self, d1: Sequence[Fraction], d2: Sequence[Fraction], d3: Sequence[Fraction]) -> Fraction:
        """
        三重交数 (D1·D2·D3)

        把 D1 展开为素分量 Σ cₖ·Yₖ，再在各分量曲面上计算 (D2|_Yₖ · D3|_Yₖ)
        """
        total = Fraction(0)
        for c, comp in zip(self.component_coordinates(d1), self.components):
            if c:
                total += c * comp.surface.dot(comp.restrict(d2), comp.restrict(d3))
        return total

    def cube(self, d: Sequence[Fraction]) -> Fraction:
        return self.triple(d, d, d)

    def curve(self, label: str) -> Tuple[Component, QVec]:
        for name, comp_name, text in self.curves:
            if name == label:
                comp = self.component(comp_name)
                return comp, comp.surface.parse_class(text)
        raise MissingParameterError(f"级 {self.name} 中没有曲线 {label}")

    def curve_dot(self, d: Sequence[Fraction], label: str) -> Fraction:
        """D·C，C 为某分量曲面上的曲线"""
        comp, cls = self.curve(label)
        return comp.surface.dot(comp.restrict(d), cls)

    def push(self, d: Sequence[Fraction]) -> QVec:
        """推出到上一级"""
        if not self.pushforward:
            raise NOBodyError(f"级 {self.name} 没有上一级")
        return combine(qvec(d), self.pushforward, len(self.pushforward[0]))

    def check_triples(self) -> None:
        """
        通过不同分量计算的三重交数必须一致

        Raises:
            ConsistencyError: 限制表抄录错误
        """
        units = [unit(self.rank, i) for i in range(self.rank)]
        for i, j, k in combinations_with_replacement(range(self.rank), 3):
            values = {
                self.triple(units[i], units[j], units[k]),
                self.triple(units[j], units[i], units[k]),
                self.triple(units[k], units[i], units[j]),
            }
            if len(values) != 1:
                raise ConsistencyError(
                    f"级 {self.name}: ({self.basis[i]}·{self.basis[j]}·{self.basis[k]}) "
                    f"经不同分量计算得到 {sorted(values)}"
                )


@dataclass(frozen=True)
class ExceptionalDivisor:
    """爆破产生的例外除子；pullback 为其在所在级的全变换"""

    stage: str
    name: str
    center: str
    pullback: str
    cube: Fraction


@dataclass(frozen=True)
class Tower:
    """
    模型族的爆破塔

    Args:
        family: 族名
        parameters: 参数名
        time: 沿例外除子方向的参数名
        mu: 伪有效阈值公式
        ledger: 系数账本
        volume: 体积闭式(多项式，账本名可用)
        stages: 各级，最后一级为顶层
    """

    family: str
    description: str
    parameters: Tuple[str, ...]
    defaults: Dict[str, Fraction]
    time: str
    mu: PwlExpr
    ledger: Ledger
    volume: str
    stages: Tuple[TowerStage, ...]
    exceptional: Tuple[ExceptionalDivisor, ...] = ()
    certificates: Tuple[Tuple[str, str], ...] = ()
    invariants: Dict[str, str] = field(default_factory=dict)
    carrier: Dict = field(default_factory=dict)
    body: Dict = field(default_factory=dict)
    glue: Optional[Dict] = None
    seshadri: Dict = field(default_factory=dict)

    @property
    def top(self) -> TowerStage:
        return self.stages[-1]

    def stage(self, name: str) -> TowerStage:
        for s in self.stages:
            if s.name == name:
                return s
        raise MissingParameterError(f"塔 {self.family} 中没有级 {name}")

    def push_down(self, d: Sequence[Fraction], source: str, target: str) -> QVec:
        """沿塔逐级推出，从 source 到 target"""
        stage = self.stage(source)
        d = qvec(d)
        while stage.name != target:
            if stage.parent is None:
                raise NOBodyError(f"级 {target} 不在 {source} 之下")
            d = stage.push(d)
            stage = self.stage(stage.parent)
        return d


def _surface_from_ref(ref: Mapping, loader) -> SurfaceModel:
    if "file" in ref:
        return load_surface(ref["file"], loader)
    if "builder" in ref:
        if ref["builder"] == "projective_plane":
            return projective_plane()
        if ref["builder"] == "p2blow7_symmetric":
            return p2blow7_symmetric_model(loader)
        raise DataFileError(f"未知的曲面构造器: {ref['builder']}")
    if "ruled" in ref:
        d1, d2 = ref["ruled"]["degrees"]
        return ruled_surface(ref["ruled"].get("genus", "C"), int(d1), int(d2))
    if "inline" in ref:
        return model_from_dict(ref["inline"])
    raise DataFileError(f"无法识别的曲面引用: {dict(ref)}")


def _component_from_dict(row: Mapping, basis: Sequence[str], named: Mapping[str, str], loader) -> Component:
    surface = _surface_from_ref(row["surface"], loader)
    missing = [b for b in basis if b not in row["restriction"]]
    if missing:
        raise DataFileError(f"分量 {row['name']} 的限制表缺少基元素: {missing}")
    restriction = tuple(surface.parse_class(str(row["restriction"][b])) for b in basis)
    cls = tuple(c.evaluate({}) for c in linear_coefficients(row.get("class", row["name"]), basis, named))
    labels = tuple(row.get("curve_labels", {}).items())
    return Component(row["name"], cls, surface, restriction, labels)


def _stage_from_dict(payload: Mapping, parent_basis: Optional[Sequence[str]], loader) -> TowerStage:
    basis = tuple(payload["basis"])
    named = dict(payload.get("named", {}))
    components = tuple(_component_from_dict(row, basis, named, loader) for row in payload["components"])
    if len(components) != len(basis):
        raise DataFileError(f"级 {payload['name']}: 分量数 {len(components)} 与基的维数 {len(basis)} 不符")
    if len({c.name for c in components}) != len(components):
        raise DataFileError(f"级 {payload['name']}: 分量名重复")
    pushforward: Tuple[QVec, ...] = ()
    if payload.get("pushforward"):
        if parent_basis is None:
            raise DataFileError(f"级 {payload['name']} 有推出映射但没有上一级")
        pushforward = tuple(
            tuple(c.evaluate({}) for c in linear_coefficients(str(payload["pushforward"][b]), parent_basis))
            for b in basis
        )
    curves = tuple((label, row["component"], row["class"]) for label, row in payload.get("curves", {}).items())
    cones = {k: tuple(v) for k, v in payload.get("cones", {}).items()}
    return TowerStage(
        name=payload["name"],
        basis=basis,
        named=tuple(named.items()),
        polarization=payload["polarization"],
        positive_part=payload["positive_part"],
        components=components,
        parent=payload.get("parent"),
        pushforward=pushforward,
        nef_classes=tuple(payload.get("nef_classes", ())),
        cones=cones,
        curves=curves,
    )


def tower_from_dict(payload: Mapping, loader=None, validate: bool = True) -> Tower:
    """
    从JSON数据构造爆破塔

    Args:
        payload: 塔数据
        loader: DataLoader 实例
        validate: 是否交叉检验三重交数与例外除子自交

    Returns:
        Tower: 爆破塔
    """
    try:
        parameters = tuple(payload["parameters"])
        time = payload.get("time", "t")
        stages: List[TowerStage] = []
        for row in payload["stages"]:
            parent_basis = None
            if row.get("parent"):
                parent_basis = next(s.basis for s in stages if s.name == row["parent"])
            stages.append(_stage_from_dict(row, parent_basis, loader))
        exceptional = tuple(
            ExceptionalDivisor(r["stage"], r["name"], r.get("center", "point"), r["pullback"],
                               parse_rational(str(r["cube"])))
            for r in payload.get("exceptional", [])
        )
        tower = Tower(
            family=payload["family"],
            description=payload.get("description", ""),
            parameters=parameters,
            defaults={k: parse_rational(str(v)) for k, v in payload.get("defaults", {}).items()},
            time=time,
            mu=parse_pwl(payload["mu"]),
            ledger=Ledger.from_data(parameters + (time,), payload["ledger"]),
            volume=payload["volume"],
            stages=tuple(stages),
            exceptional=exceptional,
            certificates=tuple((r["stage"], r["component"]) for r in payload.get("certificates", [])),
            invariants=dict(payload.get("invariants", {})),
            carrier=dict(payload.get("carrier", {})),
            body=dict(payload.get("body", {})),
            glue=payload.get("glue"),
            seshadri=dict(payload.get("seshadri", {})),
        )
    except (KeyError, StopIteration) as e:
        raise DataFileError(f"爆破塔数据格式错误: {str(e)}")
    if validate:
        check_tower(tower)
    return tower


def exceptional_cube(tower: Tower, exc: ExceptionalDivisor) -> Fraction:
    """例外除子全变换的自交 (E³)，在其产生的那一级计算"""
    stage = tower.stage(exc.stage)
    return stage.cube(stage.parse_class(exc.pullback))


def check_tower(tower: Tower) -> None:
    """
    验证限制表：三重交数对称、例外除子自交与记录值一致

    Raises:
        ConsistencyError: 数据抄录错误
    """
    for stage in tower.stages:
        stage.check_triples()
    for exc in tower.exceptional:
        value = exceptional_cube(tower, exc)
        if value != exc.cube:
            raise ConsistencyError(f"塔 {tower.family}: ({exc.name}³) = {value}，记录值为 {exc.cube}")
    logger.debug("塔 %s 的限制表通过交叉检验", tower.family)


@lru_cache(maxsize=None)
def _cached_tower(name: str) -> Tower:
    from data_processing.data_loader import DataLoader
    loader = DataLoader()
    return tower_from_dict(loader.load_tower(name), None)


def load_tower(name: str, loader=None) -> Tower:
    """
    加载爆破塔

    Args:
        name: 塔名，例如 "cxjac_tower"
        loader: DataLoader 实例，默认使用配置的数据目录(结果缓存)

    Returns:
        Tower: 爆破塔
    """
    if loader is None:
        return _cached_tower(name)
    return tower_from_dict(loader.load_tower(name), loader)


def family_tower(family) -> Tower:
    return load_tower(family.tower_name)


def stage_env(tower: Tower, family, t) -> Dict[str, Fraction]:
    """参数、t 与账本全部系数的取值(账本中各种写法断言相等)"""
    return tower.ledger.evaluate(family.env(t))
