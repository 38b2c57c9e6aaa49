"""
系数账本

按顺序定义的具名分段线性公式，后面的公式可以引用前面的名称；
同一系数的多种写法(例如 min 形式与化简形式)同时保存并在求值时断言相等
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from utils.errors import ConsistencyError, DataFileError, MissingParameterError

from .expr import PwlExpr
from .parser import parse_pwl

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LedgerEntry:
    """
    账本条目

    Args:
        name: 系数名
        formula: 主公式
        alternatives: 等价的其它写法
    """

    name: str
    formula: PwlExpr
    alternatives: Tuple[PwlExpr, ...] = ()
    source: str = ""


@dataclass
class Ledger:
    """有序系数账本"""

    parameters: Tuple[str, ...]
    entries: List[LedgerEntry] = field(default_factory=list)

    @classmethod
    def from_data(cls, parameters: Sequence[str], rows: Iterable[Mapping]) -> 'Ledger':
        """
        从数据文件行构造账本

        Args:
            parameters: 基本参数名，例如 ("s", "t")
            rows: [{"name": ..., "formula": ..., "alternatives": [...]}]

        Returns:
            Ledger: 账本
        """
        ledger = cls(tuple(parameters))
        for row in rows:
            if "name" not in row or "formula" not in row:
                raise DataFileError(f"账本条目缺少 name/formula: {row!r}")
            ledger.add(row["name"], row["formula"], row.get("alternatives", ()))
        return ledger

    def add(self, name: str, formula: str, alternatives: Iterable[str] = ()) -> None:
        known = set(self.parameters) | set(self.names)
        if name in known:
            raise DataFileError(f"账本名称重复: {name}")
        primary = parse_pwl(formula)
        alts = tuple(parse_pwl(a) for a in alternatives)
        for expr in (primary,) + alts:
            unknown = expr.variables() - known
            if unknown:
                raise DataFileError(f"账本条目 {name} 引用了未定义的名称: {sorted(unknown)}")
        self.entries.append(LedgerEntry(name, primary, alts, formula))

    @property
    def names(self) -> List[str]:
        return [e.name for e in self.entries]

    def entry(self, name: str) -> LedgerEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise MissingParameterError(f"账本中没有系数: {name}")

    def evaluate(self, env: Mapping, check: bool = True) -> Dict[str, Fraction]:
        """
        依次求值所有系数

        Args:
            env: 基本参数赋值
            check: 是否断言各种写法相等

        Returns:
            Dict[str, Fraction]: 参数与全部系数的值
        """
        values: Dict[str, Fraction] = {p: Fraction(env[p]) for p in self.parameters if p in env}
        missing = [p for p in self.parameters if p not in values]
        if missing:
            raise MissingParameterError(f"缺少参数: {missing}")
        for e in self.entries:
            value = e.formula.evaluate(values)
            if check:
                for alt in e.alternatives:
                    other = alt.evaluate(values)
                    if other != value:
                        raise ConsistencyError(
                            f"系数 {e.name} 的两种写法不一致: {e.formula} = {value}, {alt} = {other}，"
                            f"参数 {dict((p, values[p]) for p in self.parameters)}"
                        )
            values[e.name] = value
        return values

    def resolve(self, name: str, alternative: Optional[int] = None) -> PwlExpr:
        """
        把系数展开为只含基本参数的表达式

        Args:
            name: 系数名
            alternative: 使用第几种其它写法，None 为主公式

        Returns:
            PwlExpr: 只含基本参数的表达式树
        """
        bindings: Dict[str, PwlExpr] = {}
        for e in self.entries:
            expr = e.formula
            if e.name == name and alternative is not None:
                expr = e.alternatives[alternative]
            bindings[e.name] = expr.bind(bindings)
            if e.name == name:
                return bindings[name]
        raise MissingParameterError(f"账本中没有系数: {name}")

    def resolve_all(self) -> Dict[str, PwlExpr]:
        return {name: self.resolve(name) for name in self.names}
