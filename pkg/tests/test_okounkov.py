"""
Newton–Okounkov 体测试

测试三维体的顶点、截面、四维粘合体、载体修正量与 Seshadri 常数
"""

import sys
import os
import json
from fractions import Fraction

import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from okounkov import (
    body,
    carrier_corrections,
    check_body,
    final_inequalities_cxjac,
    final_inequalities_cxjac_4d,
    generator_bounds,
    glue4d,
    glue_family,
    projection_area_check,
    seshadri_curve,
    slice_area_curve,
    slice_at,
)
from ratgeom import VPoly, equal_sets, vertex_diff, volume
from threefold import ccc, cxjac, cxp2, family_tower, vol_ray
from utils.errors import ParameterRangeError, UnsupportedFamilyError

F = Fraction


def _same_vertices(p, expected) -> bool:
    diff = vertex_diff(p, expected)
    return not diff['missing'] and not diff['extra']


def _simpson(family, lo, hi):
    mid = (lo + hi) / 2
    return (hi - lo) * (slice_at(family, lo).area() + 4 * slice_at(family, mid).area() + slice_at(family, hi).area()) / 6


def test_bodies():
    """测试三维体"""
    print("测试三维体...")

    cases = {
        (3, 2): [(0, 0, 0), (5, 0, 0), (3, 2, 0), (2, 2, 0), (2, 0, 2), (5, 0, 2)],
        (1, 1): [(0, 0, 0), (2, 0, 0), (1, 1, 0), (1, 0, 1), (2, 0, 1)],
        (2, 3): [(0, 0, 0), (5, 0, 0), (3, 2, 0), (2, 2, 0), (3, 0, 3), (5, 0, 3), (3, 2, 1)],
    }
    for (a, b), expected in cases.items():
        nobody = body(cxp2(a, b))
        check_body(nobody)
        assert _same_vertices(nobody.vrep, expected), nobody.label
        assert 6 * nobody.volume() == 3 * a * b * b
    print("✓ C×P² 体测试通过")

    nobody = body(ccc(1, 1, 1))
    assert _same_vertices(nobody.vrep, [(0, 0, 0), (3, 0, 0), (1, 1, 0), (2, 0, 2)])
    assert 6 * nobody.volume() == 6
    nine = body(ccc(4, 3, 2))
    assert len(nine.vertices) == 9
    assert 6 * nine.volume() == 6 * 4 * 3 * 2
    print("✓ 三条曲线乘积的体测试通过")

    s = F(1, 2)
    nobody = body(cxjac(s))
    check_body(nobody)
    expected = [
        (0, 0, 0), (F(1, 2), F(1, 2), 0), (F(3, 4), 0, F(3, 4)), (F(5, 4), 0, 0),
        (F(7, 6), 0, F(3, 4)), (F(29, 42), F(10, 21), F(3, 14)), (F(2, 3), F(1, 2), F(1, 6)),
        (F(11, 16), F(1, 2), 0),
    ]
    assert _same_vertices(nobody.vrep, expected)
    assert len(nobody.vertices) == 8
    # 缺少 (11/16, 1/2, 0) 时凸包体积不是 s²(1-s)
    assert volume(VPoly(3, tuple(expected[:-1]))) == F(185, 1512)
    assert nobody.volume() == s * s * (1 - s)
    assert nobody.contains((F(1, 2), F(1, 4), F(1, 8)))
    assert not nobody.contains((F(1, 2), F(3, 4), 0))
    print("✓ C×Jac 体测试通过")

    for s in (F(1, 4), F(3, 7), F(5, 6)):
        assert equal_sets(body(cxjac(s)).hrep, final_inequalities_cxjac(s))
    assert len(family_tower(cxjac(F(1, 2))).body["final_inequalities"]) == 9
    assert final_inequalities_cxjac(F(1, 2)).contains((F(1, 2), F(1, 4), F(1, 8)))
    assert not final_inequalities_cxjac(F(1, 2)).contains((F(1, 2), F(3, 4), 0))
    print("✓ 组装的体与闭式不等式组一致测试通过")

    payload = json.loads(json.dumps(body(ccc(1, 1, 1)).to_dict()))
    assert payload["variables"] == ["t", "x", "y"]
    assert len(payload["vertices"]) == 4
    print("✓ 体的JSON导出测试通过")


def test_slices():
    """测试截面"""
    print("测试截面...")

    section = slice_at(ccc(1, 1, 1), F(3, 2))
    assert _same_vertices(section.polygon, [(0, 0), (0, F(3, 2)), (F(1, 2), 1), (F(3, 4), 0)])
    assert section.area() == F(3, 4)
    section = slice_at(cxp2(3, 2), "5/2")
    assert _same_vertices(section.polygon, [(0, 0), (2, 0), (0, 2)])
    print("✓ 截面多边形测试通过")

    assert slice_at(cxjac(F(1, 2)), 0).vertices == ((0, 0),)
    assert slice_at(ccc(1, 1, 1), 3).area() == 0
    with pytest.raises(ParameterRangeError):
        slice_at(ccc(1, 1, 1), F(7, 2))
    print("✓ 端点与越界测试通过")

    for family in (cxp2(2, 3), ccc(4, 3, 2), cxjac(F(1, 2))):
        nobody = body(family)
        for t in (F(1, 3), F(1, 2), F(1)):
            assert 6 * nobody.upper_volume(t) == vol_ray(family, t)
            assert equal_sets(nobody.slice(t), slice_at(family, t).polygon)
        print(f"✓ {family.label()} 截面与体积一致测试通过")

    curve = slice_area_curve(ccc(1, 1, 1), 1)
    assert list(curve['area']) == ["0", "1/2", "1/2", "0"]
    print("✓ 截面面积采样测试通过")

    # 相邻顶点高度之间截面面积是 t 的二次函数，Simpson 公式精确
    for family in (ccc(1, 1, 1), ccc(4, 3, 2), cxp2(3, 2), cxjac(F(1, 2))):
        nobody = body(family)
        levels = sorted({v[0] for v in nobody.vertices})
        total = F(0)
        for lo, hi in zip(levels, levels[1:]):
            piece = _simpson(family, lo, hi)
            assert 6 * piece == vol_ray(family, lo) - vol_ray(family, hi)
            total += piece
        assert total == nobody.volume()
        assert 6 * total == vol_ray(family, 0)
    print("✓ 截面面积积分等于体积测试通过")


def test_glues():
    """测试四维粘合体"""
    print("测试四维粘合体...")

    glue = glue4d("CxP2")
    assert _same_vertices(glue.vrep, [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (1, 1, 0, 1),
                                      (F(1, 2), F(1, 2), F(1, 2), 0)])
    assert glue_family("CxP2", F(1, 4)) == cxp2(F(3, 4), F(1, 4))
    print("✓ C×P² 粘合体测试通过")

    glue = glue4d("cxjac")
    assert _same_vertices(glue.vrep, [
        (0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, F(3, 2), 0, 0), (1, F(4, 3), 0, F(4, 3)),
        (F(3, 7), F(4, 7), F(4, 7), 0), (F(6, 7), F(9, 7), 0, F(9, 7)),
    ])
    assert glue.volume() == F(1, 12)
    assert equal_sets(glue.hrep, final_inequalities_cxjac_4d())
    assert glue_family("CxJac", F(1, 2)) == cxjac(F(1, 2))
    print("✓ C×Jac 粘合体测试通过")

    for kind in ("CxP2", "CxJac"):
        glue = glue4d(kind)
        for s in (F(1, 7), F(3, 7), F(1, 2), F(5, 6)):
            section = glue.slice(s)
            assert section is not None
            assert equal_sets(section, body(glue_family(kind, s)).vrep), f"{kind} s = {s}"
    print("✓ 粘合体在 s 处的截面等于对应三维体测试通过")

    with pytest.raises(UnsupportedFamilyError):
        glue4d("CCC")
    print("✓ 无粘合体数据报错测试通过")


def test_carrier_corrections():
    """测试载体修正量"""
    print("测试载体修正量...")

    family = cxjac(F(1, 2))
    for t, x in ((F(3, 4), F(1, 4)), (F(1, 2), F(1, 8)), (F(1), F(1, 10))):
        rows = carrier_corrections(family, t, x)
        assert [r.curve for r in rows] == ["L", "L7"]
        for r in rows:
            assert r.closed == r.computed
            assert r.closed >= 0
    print("✓ 闭式修正量与直接计算一致测试通过")

    with pytest.raises(UnsupportedFamilyError):
        carrier_corrections(ccc(1, 1, 1), 1, 0)
    print("✓ 无修正量数据报错测试通过")


def test_seshadri():
    """测试 Seshadri 常数"""
    print("测试 Seshadri 常数...")

    cases = [
        (cxp2(3, 2), F(4), "equality"),
        (cxp2(2, 2), F(4), "equality"),
        (cxp2(1, 3), F(6), None),
        (ccc(1, 1, 1), F(2), "equality"),
        (ccc(4, 3, 2), F(12), "equality"),
        (cxjac(F(1, 2)), F(1, 2), "strict"),
        (cxjac(F(3, 7)), F(18, 49), "equality"),
        (cxjac(F(1, 4)), F(1, 8), "equality"),
    ]
    for family, value, verdict in cases:
        assert seshadri_curve(family) == value, family.label()
        if verdict is not None:
            assert projection_area_check(family).verdict == verdict
    print("✓ Seshadri 常数与投影面积比较测试通过")

    check = projection_area_check(cxjac(F(1, 2)))
    assert check.rhs == F(59, 126)
    assert check.to_dict() == {"verdict": "strict", "lhs": "1/2", "rhs": "59/126"}
    bounds = generator_bounds(cxp2(3, 2))
    assert min(b.bound for b in bounds if b.bound is not None) == 4
    print("✓ 生成元约束测试通过")


def run_all_tests():
    """运行所有测试"""
    print("开始运行所有测试...\n")

    try:
        test_bodies()
        print()

        test_slices()
        print()

        test_glues()
        print()

        test_carrier_corrections()
        print()

        test_seshadri()
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
