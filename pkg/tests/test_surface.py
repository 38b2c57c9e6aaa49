"""
曲面模块测试

测试曲面模型加载、Zariski 分解、参数扫描、NO 多边形与曲面构造器
"""

import sys
import os
from fractions import Fraction

import numpy as np
import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from ratgeom import vertex_diff, volume
from ratgeom.linalg import add, combine, det, scale
from surface import (
    beta_profile,
    blowup_point,
    build_p2blow7,
    check_decomposition,
    load_surface,
    mu_of,
    next_breakpoint,
    nobody_surface,
    p2blow7_symmetric_cones,
    p2blow7_symmetric_model,
    polarization,
    projective_plane,
    ruled_cones,
    ruled_surface,
    symmetric_slice,
    with_lines,
    zariski,
    zariski_germ,
    zariski_sweep,
)
from utils.errors import DataFileError, MissingParameterError, NOBodyError, NotBigError, ParameterRangeError
from utils.helpers import random_rationals

F = Fraction


def _same_vertices(p, expected) -> bool:
    diff = vertex_diff(p, expected)
    return not diff['missing'] and not diff['extra']


def test_load_and_pairing():
    """测试模型加载与交配对"""
    print("测试模型加载与交配对...")

    model = load_surface("two_curves")
    assert model.basis == ("f1", "f2", "E")
    assert model.rank == 3
    fb1 = model.class_named("fb1")
    assert fb1 == (F(1), F(0), F(-1))
    assert model.square(fb1) == -1
    assert [c.name for c in model.negative_curves] == ["fb1", "fb2", "E"]
    print("✓ 两条曲线乘积模型测试通过")

    with pytest.raises(DataFileError):
        load_surface("no_such_surface")
    print("✓ 缺失模型报错测试通过")


def test_zariski():
    """测试 Zariski 分解"""
    print("测试 Zariski 分解...")

    model = load_surface("two_curves")
    d = model.parse_class("2*f1 + f2 - 3/2*E")
    decomp = zariski(model, d)
    assert decomp.positive == model.parse_class("3/2*fb1 + fb2 + 3/2*E")
    assert decomp.negative_coeffs == {"fb1": F(1, 2)}
    check_decomposition(model, d, decomp)
    print("✓ 单条负曲线支撑测试通过")

    nef = model.parse_class("3*f1 + 2*f2 - E")
    assert model.is_nef(nef)
    assert zariski(model, nef).negative == ()
    print("✓ nef 类的负部为零测试通过")

    jac = load_surface("genus2_jacobian")
    decomp = zariski(jac, jac.parse_class("theta - 7/5*E"))
    assert decomp.positive == jac.parse_class("3/5*theta - 4/5*E")
    assert tuple(decomp.negative_coeffs) == ("Rbar",)
    assert jac.is_nef(jac.parse_class("theta - 4/3*E"))
    assert not jac.is_nef(jac.parse_class("theta - 7/5*E"))
    print("✓ 二亏格 Jacobian 测试通过")


def test_zariski_invariants():
    """测试 Zariski 分解的极小性与唯一性"""
    print("测试 Zariski 分解的极小性与唯一性...")

    rng = np.random.default_rng(20240601)
    for name in ("two_curves", "genus2_jacobian", "p2_blow_3_cremona"):
        model = load_surface(name)
        gens = [cls for _, cls in model.effective]
        for _ in range(20):
            d = combine(random_rationals(rng, 0, 3, len(gens)), gens, model.rank)
            decomp = zariski(model, d)
            positive = decomp.positive
            assert add(positive, decomp.negative_class(model)) == d
            assert model.is_nef(positive)
            for curve, coeff in decomp.negative:
                cls = model.curve(curve).cls
                assert coeff > 0
                assert model.dot(positive, cls) == 0
                # 负部系数减半后正部不再 nef
                assert not model.is_nef(add(positive, scale(coeff / 2, cls)))
            support = [curve for curve, _ in decomp.negative]
            gram = [[model.dot(model.curve(a).cls, model.curve(b).cls) for b in support] for a in support]
            for k in range(1, len(support) + 1):
                assert (-1) ** k * det([row[:k] for row in gram[:k]]) > 0
            # d + P 的分解为 (2P, N)
            doubled = zariski(model, add(d, positive))
            assert doubled.positive == scale(2, positive)
            assert doubled.negative_coeffs == decomp.negative_coeffs
        print(f"✓ {name}: 正部 nef、与支撑正交、支撑负定、负部极小测试通过")


def test_polarization():
    """测试极化族与正部闭式"""
    print("测试极化族与正部闭式...")

    model = load_surface("two_curves")
    pol = polarization(model)
    params = {"d1": F(2), "d2": F(1)}
    d = pol.divisor(params)
    assert d == (F(2), F(1), F(0))
    assert pol.threshold(params) == 3
    assert mu_of(model, d, pol.direction()) == 3
    for t in (F(0), F(1, 2), F(3, 2), F(5, 2), F(3)):
        decomp = zariski(model, tuple(a - t * b for a, b in zip(d, pol.direction())))
        assert decomp.positive == pol.closed_positive(params, t)
    print("✓ 正部闭式与迭代分解一致测试通过")

    with pytest.raises(MissingParameterError):
        pol.divisor({"d1": F(1)})
    with pytest.raises(DataFileError):
        polarization(load_surface("p2_blow_1"))
    print("✓ 缺参与缺少极化族报错测试通过")


def test_sweep():
    """测试参数扫描与分解胚"""
    print("测试参数扫描与分解胚...")

    model = load_surface("two_curves")
    pol = polarization(model)
    d, flag = pol.divisor({"d1": F(3), "d2": F(2)}), pol.direction()
    germ = zariski_germ(model, d, flag, 0)
    assert germ.support == ()
    assert next_breakpoint(model, germ) == 2
    print("✓ 分解胚与断点测试通过")

    pieces = zariski_sweep(model, d, flag, 0, 5)
    assert pieces[0].lo == 0
    assert pieces[-1].hi == 5
    for left, right in zip(pieces, pieces[1:]):
        assert left.hi == right.lo
    ends = {p.hi for p in pieces}
    assert {F(2), F(3)} <= ends
    print("✓ 扫描分段测试通过")

    profile = beta_profile(model, d, flag)
    assert profile[0] == (0, 0)
    assert profile[-1][0] == 5
    for t, b in profile:
        assert b == min(t, F(2), 5 - t)
    with pytest.raises(ParameterRangeError):
        beta_profile(model, d, flag, (0, 6))
    print("✓ β 曲线测试通过")


def test_nobody_polygons():
    """测试 NO 多边形"""
    print("测试 NO 多边形...")

    cases = [
        ("two_curves", {"d1": F(3), "d2": F(2)}, [(0, 0), (2, 2), (3, 2), (5, 0)]),
        ("two_curves", {"d1": F(1), "d2": F(1)}, [(0, 0), (2, 0), (1, 1)]),
        ("two_curves_diagonal", {"d1": F(2), "d2": F(2)}, [(0, 0), (3, 3), (4, 2), (4, 0)]),
        ("genus2_jacobian", {}, [(0, 0), (F(3, 2), 0), (F(4, 3), F(4, 3))]),
    ]
    for name, params, expected in cases:
        model = load_surface(name)
        pol = polarization(model)
        d = pol.divisor(params)
        polygon = nobody_surface(model, d, pol.direction())
        assert _same_vertices(polygon, expected), name
        # 2·面积 = 正部自交
        assert 2 * volume(polygon) == model.square(zariski(model, d).positive)
        print(f"✓ {name} {dict((k, str(v)) for k, v in params.items())} 多边形测试通过")

    model = load_surface("two_curves")
    part = nobody_surface(model, "3*f1 + 2*f2", "E", t_range=(1, 4))
    assert _same_vertices(part, [(1, 0), (1, 1), (2, 2), (3, 2), (4, 1), (4, 0)])
    print("✓ 截取 t 区间测试通过")

    with pytest.raises(NOBodyError):
        nobody_surface(model, "3*f1 + 2*f2", "E", generic=False)
    with pytest.raises(NotBigError):
        nobody_surface(model, "f1", "E")
    print("✓ 非一般旗与非大除子报错测试通过")


def test_blowups():
    """测试点爆破与直纹面"""
    print("测试点爆破与直纹面...")

    plane = projective_plane()
    once = blowup_point(plane, {}, "e")
    h, e = once.class_named("h"), once.class_named("e")
    assert (once.square(h), once.square(e), once.dot(h, e)) == (1, -1, 0)
    cremona = load_surface("p2_blow_3_cremona")
    for name in ("l12", "l13", "l23"):
        assert cremona.square(cremona.curve(name).cls) == -1
    print("✓ 平面爆破测试通过")

    lined = blowup_point(with_lines(plane, ["l"]), {"l": 1}, "e")
    h, e = lined.class_named("h"), lined.class_named("e")
    assert [name for name, _ in lined.mori] == ["line", "l", "e"]
    assert [name for name, _ in lined.effective] == ["line", "l", "e"]
    assert lined.is_nef(h)
    assert lined.is_nef(add(h, scale(-1, e)))
    assert not lined.is_nef(add(scale(2, h), scale(-3, e)))
    assert not lined.is_nef(e)
    assert lined.is_pseudoeffective(add(h, scale(-1, e)))
    assert not lined.is_pseudoeffective(add(h, scale(-2, e)))
    assert [name for name, _ in once.mori] == ["line", "e"]
    print("✓ 爆破保留 Mori 与有效锥生成元测试通过")

    cases = [
        ((6, 4), {(1, -6), (0, 1)}, {(1, -4), (0, 1)}),
        ((1, 1), {(1, -1), (0, 1)}, {(1, -1), (0, 1)}),
        ((0, 0), {(1, 0), (0, 1)}, {(1, 0), (0, 1)}),
    ]
    for (d1, d2), eff_rays, nef_rays in cases:
        eff, nef = ruled_cones(ruled_surface("g2", d1, d2))
        assert set(eff.rays) == {tuple(F(a) for a in r) for r in eff_rays}
        assert set(nef.rays) == {tuple(F(a) for a in r) for r in nef_rays}
    print("✓ 直纹面的有效锥与 nef 锥测试通过")


def test_p2blow7():
    """测试七点配置的对称切片"""
    print("测试七点配置的对称切片...")

    ambient = build_p2blow7()
    sym_slice = symmetric_slice()
    assert sym_slice.ambient.rank == ambient.rank
    assert sym_slice.basis == ("L", "E", "E7", "G", "N")
    y = (F(1), F(0), F(2), F(0), F(-1))
    assert sym_slice.project(sym_slice.lift(y)) == y
    print("✓ 对称化投影测试通过")

    sym = p2blow7_symmetric_model()
    assert sym.square(sym.curve("L").cls) == -11
    data = p2blow7_symmetric_cones()
    assert len(data.nef_gens) == 8
    assert "2L+16(H-E7)+G" in [name for name, _ in data.nef_gens]
    assert data.table_entry("2L+16H+G", "L7") == 96
    assert data.table_entry("L+5(H-E7)+G+N", "E") == 6
    assert data.table_entry("L+11(H-E7)", "E7") == 11
    print("✓ nef 生成元与交数表测试通过")


def run_all_tests():
    """运行所有测试"""
    print("开始运行所有测试...\n")

    try:
        test_load_and_pairing()
        print()

        test_zariski()
        print()

        test_zariski_invariants()
        print()

        test_polarization()
        print()

        test_sweep()
        print()

        test_nobody_polygons()
        print()

        test_blowups()
        print()

        test_p2blow7()
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
