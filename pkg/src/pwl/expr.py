"""
分段线性表达式

仿射形式与 min / max / 正部 / 求和 / 数乘 组成的表达式树，精确求值
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from utils.errors import DataFileError, MissingParameterError
from utils.helpers import format_rational, rational_from_json, rational_to_json

Number = Union[int, Fraction]


@dataclass(frozen=True)
class AffineForm:
    """
    仿射形式 Σ cᵢ·xᵢ + const

    Args:
        coeffs: (参数名, 系数) 元组，按名称排序且不含零系数
        const: 常数项
    """

    coeffs: Tuple[Tuple[str, Fraction], ...] = ()
    const: Fraction = Fraction(0)

    def __post_init__(self):
        merged: Dict[str, Fraction] = {}
        for name, c in self.coeffs:
            merged[name] = merged.get(name, Fraction(0)) + Fraction(c)
        cleaned = tuple(sorted((k, v) for k, v in merged.items() if v != 0))
        object.__setattr__(self, 'coeffs', cleaned)
        object.__setattr__(self, 'const', Fraction(self.const))

    @classmethod
    def constant(cls, value: Number) -> 'AffineForm':
        return cls((), Fraction(value))

    @classmethod
    def variable(cls, name: str, coeff: Number = 1) -> 'AffineForm':
        return cls(((name, Fraction(coeff)),), Fraction(0))

    @classmethod
    def from_vector(cls, names: Sequence[str], vec: Sequence[Number], const: Number = 0) -> 'AffineForm':
        return cls(tuple(zip(names, (Fraction(c) for c in vec))), Fraction(const))

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def coefficient(self, name: str) -> Fraction:
        return dict(self.coeffs).get(name, Fraction(0))

    def variables(self) -> frozenset:
        return frozenset(name for name, _ in self.coeffs)

    def evaluate(self, env: Mapping[str, Number]) -> Fraction:
        total = self.const
        for name, c in self.coeffs:
            if name not in env:
                raise MissingParameterError(f"缺少参数: {name}")
            total += c * Fraction(env[name])
        return total

    def substitute(self, env: Mapping[str, Number]) -> 'AffineForm':
        """部分代入"""
        const = self.const
        rest = []
        for name, c in self.coeffs:
            if name in env:
                const += c * Fraction(env[name])
            else:
                rest.append((name, c))
        return AffineForm(tuple(rest), const)

    def to_vector(self, names: Sequence[str]) -> Tuple[Tuple[Fraction, ...], Fraction]:
        """按给定变量顺序转换为 (系数向量, 常数)"""
        extra = self.variables() - set(names)
        if extra:
            raise MissingParameterError(f"仿射形式含有未约束的参数: {sorted(extra)}")
        lookup = dict(self.coeffs)
        return tuple(lookup.get(n, Fraction(0)) for n in names), self.const

    def __add__(self, other: 'AffineForm') -> 'AffineForm':
        if not isinstance(other, AffineForm):
            other = AffineForm.constant(other)
        return AffineForm(self.coeffs + other.coeffs, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> 'AffineForm':
        return AffineForm(tuple((n, -c) for n, c in self.coeffs), -self.const)

    def __sub__(self, other: 'AffineForm') -> 'AffineForm':
        if not isinstance(other, AffineForm):
            other = AffineForm.constant(other)
        return self + (-other)

    def __mul__(self, k: Number) -> 'AffineForm':
        k = Fraction(k)
        return AffineForm(tuple((n, k * c) for n, c in self.coeffs), k * self.const)

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts = []
        for name, c in self.coeffs:
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{format_rational(c)}*{name}")
        if self.const != 0 or not parts:
            parts.append(format_rational(self.const))
        return " + ".join(parts).replace("+ -", "- ")


class PwlExpr:
    """分段线性表达式基类"""

    def evaluate(self, env: Mapping[str, Number]) -> Fraction:
        raise NotImplementedError

    def variables(self) -> frozenset:
        raise NotImplementedError

    def substitute(self, env: Mapping[str, Number]) -> 'PwlExpr':
        raise NotImplementedError

    def bind(self, bindings: Mapping[str, 'PwlExpr']) -> 'PwlExpr':
        """把参数名替换为子表达式"""
        raise NotImplementedError

    def to_dict(self) -> Dict:
        raise NotImplementedError

    def __add__(self, other) -> 'PwlExpr':
        return make_sum([self, as_expr(other)])

    __radd__ = __add__

    def __sub__(self, other) -> 'PwlExpr':
        return make_sum([self, make_scale(-1, as_expr(other))])

    def __rsub__(self, other) -> 'PwlExpr':
        return make_sum([as_expr(other), make_scale(-1, self)])

    def __neg__(self) -> 'PwlExpr':
        return make_scale(-1, self)

    def __mul__(self, k: Number) -> 'PwlExpr':
        return make_scale(k, self)

    __rmul__ = __mul__

    def __truediv__(self, k: Number) -> 'PwlExpr':
        return make_scale(1 / Fraction(k), self)


@dataclass(frozen=True)
class Affine(PwlExpr):
    form: AffineForm

    def evaluate(self, env):
        return self.form.evaluate(env)

    def variables(self):
        return self.form.variables()

    def substitute(self, env):
        return Affine(self.form.substitute(env))

    def bind(self, bindings):
        bound = [(name, c) for name, c in self.form.coeffs if name in bindings]
        if not bound:
            return self
        rest = AffineForm(tuple((n, c) for n, c in self.form.coeffs if n not in bindings), self.form.const)
        parts = [make_scale(c, bindings[name]) for name, c in bound]
        return make_sum(parts + [Affine(rest)])

    def to_dict(self):
        return {"op": "affine",
                "coeffs": {name: rational_to_json(c) for name, c in self.form.coeffs},
                "const": rational_to_json(self.form.const)}

    def __str__(self):
        return str(self.form)


@dataclass(frozen=True)
class Min(PwlExpr):
    children: Tuple[PwlExpr, ...]

    def __post_init__(self):
        if not self.children:
            raise DataFileError("Min 至少需要一个子表达式")

    def evaluate(self, env):
        return min(c.evaluate(env) for c in self.children)

    def variables(self):
        return frozenset().union(*(c.variables() for c in self.children))

    def substitute(self, env):
        return make_min([c.substitute(env) for c in self.children])

    def bind(self, bindings):
        return make_min([c.bind(bindings) for c in self.children])

    def to_dict(self):
        return {"op": "min", "args": [c.to_dict() for c in self.children]}

    def __str__(self):
        return "min(" + ", ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Max(PwlExpr):
    children: Tuple[PwlExpr, ...]

    def __post_init__(self):
        if not self.children:
            raise DataFileError("Max 至少需要一个子表达式")

    def evaluate(self, env):
        return max(c.evaluate(env) for c in self.children)

    def variables(self):
        return frozenset().union(*(c.variables() for c in self.children))

    def substitute(self, env):
        return make_max([c.substitute(env) for c in self.children])

    def bind(self, bindings):
        return make_max([c.bind(bindings) for c in self.children])

    def to_dict(self):
        return {"op": "max", "args": [c.to_dict() for c in self.children]}

    def __str__(self):
        return "max(" + ", ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Pos(PwlExpr):
    """正部 (x)₊ = max(x, 0)"""

    child: PwlExpr

    def evaluate(self, env):
        return max(self.child.evaluate(env), Fraction(0))

    def variables(self):
        return self.child.variables()

    def substitute(self, env):
        return make_pos(self.child.substitute(env))

    def bind(self, bindings):
        return make_pos(self.child.bind(bindings))

    def to_dict(self):
        return {"op": "pos", "arg": self.child.to_dict()}

    def __str__(self):
        return f"pos({self.child})"


@dataclass(frozen=True)
class Sum(PwlExpr):
    children: Tuple[PwlExpr, ...]

    def __post_init__(self):
        if not self.children:
            raise DataFileError("Sum 至少需要一个子表达式")

    def evaluate(self, env):
        return sum((c.evaluate(env) for c in self.children), Fraction(0))

    def variables(self):
        return frozenset().union(*(c.variables() for c in self.children))

    def substitute(self, env):
        return make_sum([c.substitute(env) for c in self.children])

    def bind(self, bindings):
        return make_sum([c.bind(bindings) for c in self.children])

    def to_dict(self):
        return {"op": "sum", "args": [c.to_dict() for c in self.children]}

    def __str__(self):
        return "(" + " + ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Scale(PwlExpr):
    factor: Fraction
    child: PwlExpr

    def evaluate(self, env):
        return self.factor * self.child.evaluate(env)

    def variables(self):
        return self.child.variables()

    def substitute(self, env):
        return make_scale(self.factor, self.child.substitute(env))

    def bind(self, bindings):
        return make_scale(self.factor, self.child.bind(bindings))

    def to_dict(self):
        return {"op": "scale", "factor": rational_to_json(self.factor), "arg": self.child.to_dict()}

    def __str__(self):
        return f"{format_rational(self.factor)}*{self.child}"


# ---------------------------------------------------------------------------
# 构造函数(仅做常数折叠)
# ---------------------------------------------------------------------------

def as_expr(value) -> PwlExpr:
    if isinstance(value, PwlExpr):
        return value
    if isinstance(value, AffineForm):
        return Affine(value)
    return Affine(AffineForm.constant(value))


def const(value: Number) -> PwlExpr:
    return Affine(AffineForm.constant(value))


def var(name: str) -> PwlExpr:
    return Affine(AffineForm.variable(name))


def _constant_value(expr: PwlExpr):
    if isinstance(expr, Affine) and expr.form.is_constant:
        return expr.form.const
    return None


def make_min(children: Iterable) -> PwlExpr:
    items = [as_expr(c) for c in children]
    values = [_constant_value(c) for c in items]
    if all(v is not None for v in values):
        return const(min(values))
    return items[0] if len(items) == 1 else Min(tuple(items))


def make_max(children: Iterable) -> PwlExpr:
    items = [as_expr(c) for c in children]
    values = [_constant_value(c) for c in items]
    if all(v is not None for v in values):
        return const(max(values))
    return items[0] if len(items) == 1 else Max(tuple(items))


def make_pos(child) -> PwlExpr:
    child = as_expr(child)
    value = _constant_value(child)
    if value is not None:
        return const(max(value, Fraction(0)))
    return Pos(child)


def make_sum(children: Iterable) -> PwlExpr:
    items = [as_expr(c) for c in children]
    affine = AffineForm()
    rest: List[PwlExpr] = []
    for c in items:
        if isinstance(c, Affine):
            affine = affine + c.form
        else:
            rest.append(c)
    if not rest:
        return Affine(affine)
    if affine.coeffs or affine.const != 0:
        rest.append(Affine(affine))
    return rest[0] if len(rest) == 1 else Sum(tuple(rest))


def make_scale(k: Number, child) -> PwlExpr:
    k = Fraction(k)
    child = as_expr(child)
    if k == 1:
        return child
    if isinstance(child, Affine):
        return Affine(child.form * k)
    if isinstance(child, Scale):
        return make_scale(k * child.factor, child.child)
    return Scale(k, child)


def evaluate(expr: PwlExpr, env: Mapping[str, Number]) -> Fraction:
    """
    精确求值

    Args:
        expr: 分段线性表达式
        env: 参数赋值

    Returns:
        Fraction: 精确值
    """
    return expr.evaluate(env)


# ---------------------------------------------------------------------------
# JSON 树
# ---------------------------------------------------------------------------

def expr_to_dict(expr: PwlExpr) -> Dict:
    return expr.to_dict()


def expr_from_dict(payload: Dict) -> PwlExpr:
    """
    从JSON树读取表达式

    Args:
        payload: {"op": "affine"|"min"|"max"|"pos"|"sum"|"scale", ...}

    Returns:
        PwlExpr: 表达式
    """
    try:
        op = payload["op"]
        if op == "affine":
            coeffs = tuple((name, rational_from_json(c)) for name, c in payload.get("coeffs", {}).items())
            return Affine(AffineForm(coeffs, rational_from_json(payload.get("const", "0"))))
        if op == "min":
            return Min(tuple(expr_from_dict(c) for c in payload["args"]))
        if op == "max":
            return Max(tuple(expr_from_dict(c) for c in payload["args"]))
        if op == "pos":
            return Pos(expr_from_dict(payload["arg"]))
        if op == "sum":
            return Sum(tuple(expr_from_dict(c) for c in payload["args"]))
        if op == "scale":
            return Scale(rational_from_json(payload["factor"]), expr_from_dict(payload["arg"]))
    except (KeyError, TypeError) as e:
        raise DataFileError(f"表达式JSON格式错误: {str(e)}")
    raise DataFileError(f"不支持的表达式节点: {op}")
