"""
曲面模型

Néron–Severi 基、交配对、候选负曲线、Mori/有效生成元，以及有效性与nef判定
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pwl import PwlExpr, linear_coefficients, parse_pwl
from ratgeom import HPoly, QCone, cone_to_hpoly, dual_cone
from ratgeom.linalg import QVec, bilinear, dot, qvec, scale, sub, unit
from utils.errors import DataFileError, MissingParameterError, NOBodyError, ParameterRangeError, UnboundedError

logger = logging.getLogger(__name__)

# 曲面除子类就是模型基下的有理坐标向量
SurfaceDivisor = QVec


@dataclass(frozen=True)
class Curve:
    """
    模型中的曲线

    Args:
        name: 曲线名
        cls: 曲线类
        auxiliary: 非负自交的辅助检验曲线
    """

    name: str
    cls: QVec
    auxiliary: bool = False


@dataclass(frozen=True)
class SurfaceModel:
    """
    曲面 Néron–Severi 模型

    Args:
        name: 模型名
        basis: 基元素名
        pairing: 交配对矩阵(对称)
        curves: 候选负曲线与辅助检验曲线
        mori: nef 检验用的曲线类 (名称, 类)
        effective: 有效锥生成元 (名称, 类)
        named: 具名类，以基表示
    """

    name: str
    basis: Tuple[str, ...]
    pairing: Tuple[QVec, ...]
    curves: Tuple[Curve, ...] = ()
    mori: Tuple[Tuple[str, QVec], ...] = ()
    effective: Tuple[Tuple[str, QVec], ...] = ()
    named: Tuple[Tuple[str, QVec], ...] = ()
    metadata: Dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.basis)
        pairing = tuple(qvec(row) for row in self.pairing)
        if len(pairing) != n or any(len(row) != n for row in pairing):
            raise DataFileError(f"模型 {self.name} 的配对矩阵尺寸与基不符")
        for i in range(n):
            for j in range(i):
                if pairing[i][j] != pairing[j][i]:
                    raise DataFileError(f"模型 {self.name} 的配对矩阵不对称: ({i},{j})")
        object.__setattr__(self, 'pairing', pairing)
        for c in self.curves:
            if len(c.cls) != n:
                raise DataFileError(f"曲线 {c.name} 的维数与模型 {self.name} 不符")
            if not c.auxiliary and bilinear(pairing, c.cls, c.cls) >= 0:
                raise DataFileError(f"曲线 {c.name} 自交非负，必须标记为辅助检验曲线")
        for label, items in (('mori', self.mori), ('effective', self.effective), ('named', self.named)):
            for name, cls in items:
                if len(cls) != n:
                    raise DataFileError(f"{label} 类 {name} 的维数与模型 {self.name} 不符")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def dot(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return bilinear(self.pairing, u, v)

    def square(self, u: Sequence[Fraction]) -> Fraction:
        return self.dot(u, u)

    @property
    def negative_curves(self) -> List[Curve]:
        return [c for c in self.curves if not c.auxiliary]

    def curve(self, name: str) -> Curve:
        for c in self.curves:
            if c.name == name:
                return c
        raise MissingParameterError(f"模型 {self.name} 中没有曲线 {name}")

    def class_named(self, name: str) -> QVec:
        """基元素、具名类或曲线的类"""
        if name in self.basis:
            return unit(self.rank, self.basis.index(name))
        for n, cls in self.named:
            if n == name:
                return cls
        return self.curve(name).cls

    def _named_texts(self) -> Dict[str, str]:
        out = {}
        for name, cls in tuple(self.named) + tuple((c.name, c.cls) for c in self.curves):
            if name in self.basis or name in out:
                continue
            out[name] = " + ".join(f"({a})*{b}" for a, b in zip(cls, self.basis) if a) or "0"
        return out

    def parametric_class(self, text: str, definitions: Optional[Mapping[str, str]] = None) -> List[PwlExpr]:
        """
        解析含参数的类表达式

        Args:
            text: 例如 "min(d1, tau)*fb1 + tau*E"
            definitions: 参数缩写

        Returns:
            List[PwlExpr]: 各基元素的系数表达式
        """
        return linear_coefficients(text, self.basis, self._named_texts(), definitions)

    def parse_class(self, text: str, env: Optional[Mapping] = None,
                    definitions: Optional[Mapping[str, str]] = None) -> QVec:
        """
        解析类表达式并在参数赋值处求值

        Args:
            text: 例如 "4*theta - 6*E"
            env: 参数赋值

        Returns:
            QVec: 类坐标
        """
        coeffs = self.parametric_class(text, definitions)
        return tuple(c.evaluate(env or {}) for c in coeffs)

    # ------------------------------------------------------------------
    # 锥
    # ------------------------------------------------------------------

    @cached_property
    def effective_hpoly(self) -> HPoly:
        if not self.effective:
            raise NOBodyError(f"模型 {self.name} 没有有效锥生成元")
        return cone_to_hpoly(QCone(self.rank, tuple(cls for _, cls in self.effective)))

    @cached_property
    def nef_cone(self) -> QCone:
        """Mori 生成元关于交配对的对偶锥"""
        if not self.mori:
            raise NOBodyError(f"模型 {self.name} 没有 Mori 生成元，无法判定 nef")
        return dual_cone(QCone(self.rank, tuple(cls for _, cls in self.mori)), self.pairing)

    def nef_failures(self, d: Sequence[Fraction]) -> List[Tuple[str, Fraction]]:
        """与 d 相交为负的 Mori 生成元"""
        if not self.mori:
            raise NOBodyError(f"模型 {self.name} 没有 Mori 生成元，无法判定 nef")
        d = qvec(d)
        failures = []
        for name, cls in self.mori:
            value = self.dot(d, cls)
            if value < 0:
                failures.append((name, value))
        return failures

    def is_nef(self, d: Sequence[Fraction]) -> bool:
        return not self.nef_failures(d)

    def is_pseudoeffective(self, d: Sequence[Fraction]) -> bool:
        return self.effective_hpoly.contains(qvec(d))

    def mu_of(self, d: Sequence[Fraction], direction: Sequence[Fraction]) -> Fraction:
        """
        最大的 t 使 d - t·direction 伪有效

        Args:
            d: 伪有效类
            direction: 方向类

        Returns:
            Fraction: 阈值
        """
        d, direction = qvec(d), qvec(direction)
        h = self.effective_hpoly
        if not h.contains(d):
            raise ParameterRangeError(f"类 {d} 在模型 {self.name} 中不是伪有效的")
        bound: Optional[Fraction] = None
        for normal, _ in h.inequalities:
            slope = dot(normal, direction)
            if slope > 0:
                value = dot(normal, d) / slope
                bound = value if bound is None else min(bound, value)
        for normal, _ in h.equalities:
            if dot(normal, direction) != 0:
                return Fraction(0)
        if bound is None:
            raise UnboundedError(f"方向 {direction} 上伪有效阈值无界")
        return bound


def _class_from_data(basis: Sequence[str], named: Mapping[str, str], value) -> QVec:
    if isinstance(value, str):
        coeffs = linear_coefficients(value, basis, named)
        return tuple(c.evaluate({}) for c in coeffs)
    return qvec(value)


def model_from_dict(payload: Mapping) -> SurfaceModel:
    """
    从JSON数据构造曲面模型

    Args:
        payload: {"name", "basis", "pairing", "named", "curves", "mori", "effective", ...}

    Returns:
        SurfaceModel: 模型
    """
    try:
        basis = tuple(payload['basis'])
        pairing = tuple(tuple(Fraction(str(a)) for a in row) for row in payload['pairing'])
        named_texts: Dict[str, str] = dict(payload.get('named', {}))
        named = tuple((name, _class_from_data(basis, {}, text)) for name, text in named_texts.items())
        curves = []
        for row in payload.get('curves', []):
            cls = _class_from_data(basis, named_texts, row.get('class', row['name']))
            curves.append(Curve(row['name'], cls, bool(row.get('auxiliary', False))))
        all_named = dict(named_texts)
        for row in payload.get('curves', []):
            all_named.setdefault(row['name'], row.get('class', row['name']))

        def lookup(items):
            out = []
            for item in items:
                name = item if isinstance(item, str) else item['name']
                text = name if isinstance(item, str) else item.get('class', name)
                out.append((name, _class_from_data(basis, all_named, text)))
            return tuple(out)

        metadata = {k: v for k, v in payload.items()
                    if k not in ('basis', 'pairing', 'named', 'curves', 'mori', 'effective')}
        return SurfaceModel(
            name=payload['name'],
            basis=basis,
            pairing=pairing,
            curves=tuple(curves),
            mori=lookup(payload.get('mori', [])),
            effective=lookup(payload.get('effective', [])),
            named=named,
            metadata=metadata,
        )
    except KeyError as e:
        raise DataFileError(f"曲面模型数据缺少字段: {str(e)}")


def load_surface(name: str, loader=None) -> SurfaceModel:
    """
    加载数据目录中的曲面模型

    Args:
        name: 模型名
        loader: DataLoader 实例，默认使用配置的数据目录

    Returns:
        SurfaceModel: 模型
    """
    if loader is None:
        from data_processing.data_loader import DataLoader
        loader = DataLoader()
    model = model_from_dict(loader.load_surface(name))
    logger.debug("已加载曲面模型 %s (秩 %d, %d 条曲线)", model.name, model.rank, len(model.curves))
    return model


def along(d: Sequence[Fraction], direction: Sequence[Fraction], t) -> QVec:
    """d - t·direction"""
    return sub(qvec(d), scale(Fraction(t), qvec(direction)))


def is_nef(model: SurfaceModel, d: Sequence[Fraction]) -> bool:
    """d 与所有 Mori 生成元相交非负"""
    return model.is_nef(d)


def is_pseudoeffective(model: SurfaceModel, d: Sequence[Fraction]) -> bool:
    return model.is_pseudoeffective(d)


def mu_of(model: SurfaceModel, d: Sequence[Fraction], direction: Sequence[Fraction]) -> Fraction:
    return model.mu_of(d, direction)


@dataclass(frozen=True)
class Polarization:
    """
    数据文件中的极化族与正部闭式

    Args:
        model: 曲面模型
        parameters: 参数名
        cls: 极化类表达式
        flag: 旗曲线 (方向)
        definitions: 参数缩写
        positive_part: P_σ(L_t) 的闭式
        mu: 伪有效阈值闭式
    """

    model: SurfaceModel
    parameters: Tuple[str, ...]
    cls: str
    flag: str
    definitions: Tuple[Tuple[str, str], ...]
    positive_part: str
    mu: str

    def env(self, params: Mapping[str, Fraction], t=None) -> Dict[str, Fraction]:
        missing = [p for p in self.parameters if p not in params]
        if missing:
            raise MissingParameterError(f"模型 {self.model.name} 缺少参数: {missing}")
        out = {k: Fraction(v) for k, v in params.items()}
        if t is not None:
            out["t"] = Fraction(t)
        return out

    def divisor(self, params: Mapping[str, Fraction]) -> QVec:
        return self.model.parse_class(self.cls, self.env(params))

    def direction(self) -> QVec:
        return self.model.parse_class(self.flag)

    def threshold(self, params: Mapping[str, Fraction]) -> Fraction:
        return parse_pwl(self.mu).evaluate(self.env(params))

    def closed_positive(self, params: Mapping[str, Fraction], t) -> QVec:
        """闭式给出的 P_σ(d - t·flag)"""
        return self.model.parse_class(self.positive_part, self.env(params, t), dict(self.definitions))


def polarization(model: SurfaceModel) -> Polarization:
    """
    读取模型的极化族

    Raises:
        DataFileError: 模型数据没有 polarization 字段
    """
    data = model.metadata.get("polarization")
    if not data:
        raise DataFileError(f"模型 {model.name} 没有极化族数据")
    try:
        return Polarization(
            model=model,
            parameters=tuple(data.get("parameters", [])),
            cls=data["class"],
            flag=data["flag"],
            definitions=tuple(data.get("definitions", {}).items()),
            positive_part=data["positive_part"],
            mu=str(data["mu"]),
        )
    except KeyError as e:
        raise DataFileError(f"模型 {model.name} 的极化族缺少字段: {str(e)}")
