"""
模型族

三类极化三维簇：C×P² (a, b)、三条曲线的乘积 (d1 ≥ d2 ≥ d3)、C×Jac (s)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from utils.errors import MissingParameterError, ParameterRangeError, UnsupportedFamilyError
from utils.helpers import parse_rational

logger = logging.getLogger(__name__)

FAMILY_PARAMETERS: Dict[str, Tuple[str, ...]] = {
    "CxP2": ("a", "b"),
    "CCC": ("d1", "d2", "d3"),
    "CxJac": ("s",),
}

TOWER_FILES = {
    "CxP2": "cxp2_tower",
    "CCC": "ccc_tower",
    "CxJac": "cxjac_tower",
}

_ALIASES = {k.lower(): k for k in FAMILY_PARAMETERS}


def normalize_kind(kind: str) -> str:
    """接受大小写不敏感的族名"""
    key = str(kind).strip()
    if key in FAMILY_PARAMETERS:
        return key
    if key.lower() in _ALIASES:
        return _ALIASES[key.lower()]
    raise UnsupportedFamilyError(f"不支持的模型族: {kind!r}，可选 {sorted(FAMILY_PARAMETERS)}")


def validate_params(kind: str, params: Mapping[str, Fraction]) -> None:
    """
    检查参数满足族的约束

    Raises:
        MissingParameterError: 缺少参数
        ParameterRangeError: 参数越界
    """
    names = FAMILY_PARAMETERS[kind]
    missing = [p for p in names if p not in params]
    if missing:
        raise MissingParameterError(f"{kind} 缺少参数: {missing}")
    extra = [p for p in params if p not in names]
    if extra:
        raise MissingParameterError(f"{kind} 不接受参数: {extra}")
    if kind == "CxP2":
        if params["a"] <= 0 or params["b"] <= 0:
            raise ParameterRangeError(f"CxP2 要求 a, b > 0，实际 a = {params['a']}, b = {params['b']}")
    elif kind == "CCC":
        d1, d2, d3 = params["d1"], params["d2"], params["d3"]
        if not d1 >= d2 >= d3 > 0:
            raise ParameterRangeError(f"CCC 要求 d1 ≥ d2 ≥ d3 > 0，实际 ({d1}, {d2}, {d3})")
    elif kind == "CxJac":
        if not 0 < params["s"] < 1:
            raise ParameterRangeError(f"CxJac 要求 0 < s < 1，实际 s = {params['s']}")


@dataclass(frozen=True)
class ModelFamily:
    """
    带参数的模型族

    Args:
        kind: 族名 CxP2 / CCC / CxJac
        params: 参数 (名称, 值)
    """

    kind: str
    params: Tuple[Tuple[str, Fraction], ...]

    def __post_init__(self):
        kind = normalize_kind(self.kind)
        params = tuple((k, Fraction(v)) for k, v in self.params)
        validate_params(kind, dict(params))
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'params', params)

    @classmethod
    def create(cls, kind: str, **params) -> 'ModelFamily':
        """
        构造模型族

        Args:
            kind: 族名
            **params: 参数，可以是 "p/q" 字符串

        Returns:
            ModelFamily: 模型族
        """
        kind = normalize_kind(kind)
        order = FAMILY_PARAMETERS[kind]
        values = {k: parse_rational(v) for k, v in params.items()}
        return cls(kind, tuple((k, values[k]) for k in order if k in values)
                   + tuple((k, v) for k, v in values.items() if k not in order))

    @property
    def values(self) -> Dict[str, Fraction]:
        return dict(self.params)

    def env(self, t=None) -> Dict[str, Fraction]:
        """参数赋值，可附带 t"""
        out = self.values
        if t is not None:
            out["t"] = Fraction(t)
        return out

    @property
    def tower_name(self) -> str:
        return TOWER_FILES[self.kind]

    def label(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}({inner})"


def cxp2(a, b) -> ModelFamily:
    return ModelFamily.create("CxP2", a=a, b=b)


def ccc(d1, d2, d3) -> ModelFamily:
    return ModelFamily.create("CCC", d1=d1, d2=d2, d3=d3)


def cxjac(s) -> ModelFamily:
    return ModelFamily.create("CxJac", s=s)
