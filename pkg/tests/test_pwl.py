"""
分段线性表达式测试

测试公式解析、求值、代入、账本与分支胞腔
"""

import sys
import os
import json
from fractions import Fraction

import numpy as np
import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from pwl import (
    AffineForm,
    Ledger,
    Max,
    Min,
    Pos,
    Scale,
    Sum,
    branches,
    breakpoints,
    concave_pieces,
    expr_from_dict,
    expr_to_dict,
    linear_coefficients,
    parse_affine,
    parse_pwl,
    var,
)
from ratgeom import HPoly
from threefold import cxjac, family_tower
from utils.errors import ConsistencyError, DataFileError, MissingParameterError
from utils.helpers import random_rational_points, random_rationals

F = Fraction


def _square(lo, hi) -> HPoly:
    return HPoly(2, (
        ((F(1), F(0)), F(lo)), ((F(-1), F(0)), -F(hi)),
        ((F(0), F(1)), F(lo)), ((F(0), F(-1)), -F(hi)),
    ))


def test_parse_and_evaluate():
    """测试解析与求值"""
    print("测试解析与求值...")

    expr = parse_pwl("min(1 - s, 1 + s/2 - t)")
    assert expr.evaluate({"s": F(1, 2), "t": F(1, 4)}) == F(1, 2)
    assert expr.evaluate({"s": F(1, 2), "t": F(1)}) == F(1, 4)
    assert expr.variables() == {"s", "t"}
    print("✓ min 表达式测试通过")

    assert parse_pwl("pos(t - 2)").evaluate({"t": F(1)}) == 0
    assert parse_pwl("pos(t - 2)").evaluate({"t": F(5, 2)}) == F(1, 2)
    assert parse_pwl("max(a, b) - min(a, b)").evaluate({"a": F(3), "b": F(-1)}) == 4
    print("✓ pos/max 表达式测试通过")

    with pytest.raises(DataFileError):
        parse_pwl("0.5*t")
    with pytest.raises(DataFileError):
        parse_pwl("s*t")
    with pytest.raises(MissingParameterError):
        expr.evaluate({"s": F(1)})
    print("✓ 小数、乘积与缺参报错测试通过")


def test_substitute_and_bind():
    """测试代入与绑定"""
    print("测试代入与绑定...")

    expr = parse_pwl("min(a, a + b - t)")
    partial = expr.substitute({"a": F(3), "b": F(2)})
    assert partial.variables() == {"t"}
    assert partial.evaluate({"t": F(4)}) == 1
    bound = expr.bind({"a": parse_pwl("1 - s"), "b": parse_pwl("s")})
    assert bound.variables() == {"s", "t"}
    assert bound.evaluate({"s": F(1, 4), "t": F(1, 2)}) == F(1, 2)
    assert (-expr).evaluate({"a": 1, "b": 1, "t": 0}) == -1
    print("✓ 部分代入与绑定测试通过")

    form = parse_affine("2*x - y/3 + 1")
    assert form == AffineForm((("x", F(2)), ("y", F(-1, 3))), F(1))
    assert form.to_vector(["y", "x"]) == ((F(-1, 3), F(2)), F(1))
    with pytest.raises(DataFileError):
        parse_affine("min(x, y)")
    print("✓ 仿射形式测试通过")


def test_dict_tree():
    """测试表达式的JSON树"""
    print("测试表达式的JSON树...")

    tree = Sum((
        Min((parse_pwl("1 - s"), parse_pwl("1 + s/2 - t"))),
        Scale(F(3, 2), Max((var("s"), Pos(parse_pwl("t - 1/3"))))),
        Pos(parse_pwl("x - 2*s")),
    ))
    payload = json.loads(json.dumps(expr_to_dict(tree)))
    assert payload["op"] == "sum"
    assert [c["op"] for c in payload["args"]] == ["min", "scale", "pos"]
    back = expr_from_dict(payload)
    assert back == tree

    ledger_expr = parse_pwl("min(j + r, j/2 + 3*e/2) - pos(y - r)")
    assert expr_from_dict(expr_to_dict(ledger_expr)) == ledger_expr

    rng = np.random.default_rng(11)
    names = ["s", "t", "x", "j", "r", "e", "y"]
    samples = [random_rationals(rng, -2, 2, 40) for _ in names]
    for values in zip(*samples):
        env = dict(zip(names, values))
        assert back.evaluate(env) == tree.evaluate(env)
        assert expr_from_dict(expr_to_dict(ledger_expr)).evaluate(env) == ledger_expr.evaluate(env)
    print("✓ min/max/pos/scale/sum 树往返与随机求值测试通过")

    with pytest.raises(DataFileError):
        expr_from_dict({"op": "log", "args": []})
    with pytest.raises(DataFileError):
        expr_from_dict({"op": "min"})
    print("✓ 非法JSON树报错测试通过")


def test_linear_coefficients():
    """测试除子类系数提取"""
    print("测试除子类系数提取...")

    coeffs = linear_coefficients("min(d1, tau)*fb1 + tau*E", ["f1", "f2", "E"],
                                 {"fb1": "f1 - E"}, {"tau": "d1 + d2 - t"})
    env = {"d1": F(2), "d2": F(1), "t": F(3, 2)}
    assert [c.evaluate(env) for c in coeffs] == [F(3, 2), F(0), F(0)]
    print("✓ 参数类表达式测试通过")


def test_ledger():
    """测试系数账本"""
    print("测试系数账本...")

    ledger = Ledger.from_data(["s", "t"], [
        {"name": "e", "formula": "1 + s/2 - t"},
        {"name": "j", "formula": "min(1 - s, e)", "alternatives": ["1 - s - pos(t - 3*s/2)"]},
    ])
    values = ledger.evaluate({"s": F(1, 2), "t": F(1)})
    assert values["e"] == F(1, 4)
    assert values["j"] == F(1, 4)
    assert ledger.resolve("j").variables() == {"s", "t"}
    print("✓ 账本求值与展开测试通过")

    bad = Ledger.from_data(["s", "t"], [
        {"name": "e", "formula": "1 + s/2 - t"},
        {"name": "j", "formula": "min(1 - s, e)", "alternatives": ["1 - s"]},
    ])
    with pytest.raises(ConsistencyError):
        bad.evaluate({"s": F(1, 2), "t": F(1)})
    with pytest.raises(DataFileError):
        Ledger.from_data(["s"], [{"name": "u", "formula": "s + w"}])
    print("✓ 写法不一致与未定义名称报错测试通过")


def test_branches():
    """测试分支胞腔"""
    print("测试分支胞腔...")

    expr = parse_pwl("min(x, y)")
    cells = branches(expr, _square(0, 1), ["x", "y"])
    assert len(cells) == 2
    forms = {str(c.active_form) for c in cells}
    assert forms == {"x", "y"}
    print("✓ 二维胞腔测试通过")

    assert breakpoints(parse_pwl("min(t, 2) + pos(t - 3)"), "t", 0, 5) == [0, 2, 3, 5]
    print("✓ 一维断点测试通过")

    pieces = concave_pieces(parse_pwl("min(x, 1 - y)"), _square(0, 1), ["x", "y"])
    assert len(pieces) == 2
    with pytest.raises(ConsistencyError):
        concave_pieces(parse_pwl("max(x, y)"), _square(0, 1), ["x", "y"])
    print("✓ 凹分解测试通过")


def test_tower_ledger_branches():
    """测试 C×Jac 账本的分支证书"""
    print("测试 C×Jac 账本的分支证书...")

    tower = family_tower(cxjac(F(1, 2)))
    domain = HPoly(2, (
        ((F(1), F(0)), F(0)), ((F(-1), F(0)), F(-1)),
        ((F(0), F(1)), F(0)), ((F(1, 2), F(-1)), F(-1)),
    ))
    rng = np.random.default_rng(20240601)
    points = random_rational_points(rng, [(0, 0), (1, 0), (0, 1), (1, F(3, 2))], 200)
    checked = 0
    for name in tower.ledger.names:
        expr = tower.ledger.resolve(name)
        if not expr.variables() or not expr.variables() <= {"s", "t"}:
            continue
        cells = branches(expr, domain, ["s", "t"])
        for p in points:
            env = {"s": p[0], "t": p[1]}
            cell = next(c for c in cells if c.guard.contains(p))
            assert cell.active_form.evaluate(env) == expr.evaluate(env)
        checked += 1
    assert checked > 0
    print(f"✓ {checked} 个账本系数的分支证书测试通过")


def run_all_tests():
    """运行所有测试"""
    print("开始运行所有测试...\n")

    try:
        test_parse_and_evaluate()
        print()

        test_substitute_and_bind()
        print()

        test_dict_tree()
        print()

        test_linear_coefficients()
        print()

        test_ledger()
        print()

        test_branches()
        print()

        test_tower_ledger_branches()
        print()

        print("🎉 所有测试通过！")
        return True

    except Exception as e:
        print(f"❌ 测试失败: {str(e)}")
        import traceback
        traceback.print_exc()
        return False


if __name__ == "__main__":
    success = run_all_tests()
    if not success:
        sys.exit(1)
