"""
三维模型族测试

测试族参数校验、爆破塔数据、σ-分解、体积、nef 判定与锥阈值
"""

import sys
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from threefold import (
    ModelFamily,
    ccc,
    check_pushforward,
    check_thresholds,
    check_tower,
    cones,
    cxjac,
    cxp2,
    family_tower,
    load_tower,
    mu,
    negative_part_certificates,
    normalize_kind,
    psigma,
    stage_env,
    thresholds,
    verify_nef3,
    verify_psigma_nef,
    vol_ray,
    volume_breakpoints,
    volume_curve,
    volume_pieces,
)
from data_processing.data_loader import DataLoader
from utils.errors import MissingParameterError, ParameterRangeError, UnsupportedFamilyError

F = Fraction


def test_families():
    """测试族构造与参数校验"""
    print("测试族构造与参数校验...")

    family = ModelFamily.create("cxjac", s="1/2")
    assert family.kind == "CxJac"
    assert family.values == {"s": F(1, 2)}
    assert family == cxjac(F(1, 2))
    assert family.env(1)["t"] == 1
    assert normalize_kind("ccc") == "CCC"
    print("✓ 族名与参数解析测试通过")

    with pytest.raises(ParameterRangeError):
        cxp2(0, 1)
    with pytest.raises(ParameterRangeError):
        ccc(1, 2, 1)
    with pytest.raises(ParameterRangeError):
        cxjac(1)
    with pytest.raises(MissingParameterError):
        ModelFamily.create("CxP2", a=1)
    with pytest.raises(MissingParameterError):
        ModelFamily.create("CxJac", s="1/2", a=1)
    with pytest.raises(UnsupportedFamilyError):
        normalize_kind("P3")
    print("✓ 参数越界、缺参与未知族报错测试通过")


def test_towers():
    """测试爆破塔数据的交叉检验"""
    print("测试爆破塔数据的交叉检验...")

    for family in (cxp2(3, 2), ccc(1, 1, 1), cxjac(F(1, 2))):
        tower = family_tower(family)
        check_tower(tower)
        assert tower.top is tower.stages[-1]
        print(f"✓ {tower.family} 塔测试通过")

    family = cxjac(F(1, 2))
    serial = load_tower(family.tower_name, DataLoader())
    shared = load_tower(family.tower_name, DataLoader())
    env = stage_env(serial, family, 1)
    texts = list(serial.top.nef_classes) + [serial.top.polarization, serial.top.positive_part]
    expected = [serial.top.parse_class(text, env) for text in texts]
    with ThreadPoolExecutor(max_workers=8) as pool:
        got = list(pool.map(lambda text: shared.top.parse_class(text, env), texts * 40))
    assert got == expected * 40
    print("✓ 多线程共享同一级解析类公式测试通过")


def test_psigma():
    """测试 σ-分解"""
    print("测试 σ-分解...")

    family = cxp2(3, 2)
    assert psigma(family, 1).negative == ()
    decomp = psigma(family, F(5, 2))
    assert decomp.negative
    assert all(c > 0 for _, c in decomp.negative)
    print("✓ C×P² 负部出现测试通过")

    for family, t in ((cxp2(3, 2), F(5, 2)), (ccc(4, 3, 2), F(7, 2)), (cxjac(F(1, 2)), F(1))):
        check_pushforward(family, t)
    print("✓ 正部逐级推出测试通过")

    with pytest.raises(ParameterRangeError):
        psigma(ccc(1, 1, 1), 4)
    with pytest.raises(ParameterRangeError):
        psigma(ccc(1, 1, 1), -1)
    print("✓ t 越界报错测试通过")


def test_volumes():
    """测试体积"""
    print("测试体积...")

    family = ccc(1, 1, 1)
    assert mu(family) == 3
    assert [vol_ray(family, t) for t in range(4)] == [6, 5, 1, 0]
    assert {F(0), F(1), F(2), F(3)} <= set(volume_breakpoints(family))
    pieces = volume_pieces(family)
    assert [(p.lo, p.hi) for p in pieces] == [(0, 1), (1, 2), (2, 3)]
    assert pieces[0].at(F(1, 2)) == 6 - F(1, 8)
    assert pieces[1].at(F(3, 2)) == 2 * F(27, 8) - 9 * F(9, 4) + 9 * F(3, 2) + 3
    assert pieces[2].at(F(5, 2)) == F(1, 8)
    print("✓ CCC(1,1,1) 体积分段测试通过")

    for s in (F(1, 2), F(1, 3), F(4, 5)):
        assert vol_ray(cxjac(s), 0) == 6 * s * s * (1 - s)
    assert vol_ray(cxjac(F(1, 2)), 0) == F(3, 4)
    assert vol_ray(cxp2(3, 2), 0) == 36
    assert vol_ray(cxp2(3, 2), 5) == 0
    print("✓ t = 0 与 t = μ 的体积测试通过")

    curve = volume_curve(family, 1)
    assert list(curve['t']) == ["0", "1", "2", "3"]
    assert list(curve['vol']) == ["6", "5", "1", "0"]
    with pytest.raises(ParameterRangeError):
        volume_curve(family, 0)
    print("✓ 体积采样表测试通过")


def test_nef():
    """测试 nef 判定"""
    print("测试 nef 判定...")

    for family in (cxp2(3, 2), ccc(4, 3, 2), cxjac(F(1, 2))):
        top = mu(family)
        for t in (F(0), top / 3, top / 2, top):
            verdict = verify_psigma_nef(family, t)
            assert verdict.is_nef, f"{family.label()} t = {t}: {verdict.status}"
    print("✓ 正部 nef 测试通过")

    verdict = verify_nef3(family_tower(cxp2(3, 2)).top, psigma(cxp2(3, 2), F(5, 2)).polarization.cls)
    assert verdict.status == "not_nef"
    assert "P1x" in verdict.failing_curves
    assert "Cx" not in verdict.failing_curves
    assert not verdict
    verdict = verify_nef3(family_tower(cxp2(2, 3)).top, psigma(cxp2(2, 3), F(5, 2)).polarization.cls)
    assert "Cx" in verdict.failing_curves
    print("✓ L_t 不 nef 的失败曲线测试通过")

    for family in (cxp2(3, 2), ccc(4, 3, 2), cxjac(F(1, 4))):
        top = mu(family)
        for t in (top / 4, top / 2, 3 * top / 4):
            assert all(c.certified for c in negative_part_certificates(family, t))
    print("✓ 负部极小性证书测试通过")

    certs = negative_part_certificates(cxjac(F(1, 2)), F(1))
    top_certs = {c.component: c for c in certs if c.stage == "top"}
    assert set(top_certs) == {"Jc", "FR", "FC", "G", "N"}
    assert [top_certs[name].sigma for name in ("Jc", "FR", "FC", "G", "N")] == [F(1, 4), F(1, 3), F(1, 2), F(5, 8), 1]
    assert all(c.certified for c in certs)
    print("✓ 顶层爆破分量的负部证书测试通过")

    stage = family_tower(cxjac(F(1, 2))).top
    assert len(stage.nef_classes) == 3
    for text in stage.nef_classes:
        assert verify_nef3(stage, stage.parse_class(text)).is_nef, text
    print("✓ 顶层 nef 类测试通过")


def test_thresholds():
    """测试锥阈值"""
    print("测试锥阈值...")

    values = check_thresholds(cxp2(3, 2))
    assert (values["mu"], values["nu"], values["epsilon"]) == (5, 2, 2)
    values = check_thresholds(cxjac(F(1, 2)))
    assert (values["mu"], values["nu"], values["epsilon"]) == (F(5, 4), F(3, 4), F(1, 2))
    values = thresholds(cxjac(F(3, 4)))
    assert values["nu"] == F(9, 8)
    assert values["epsilon"] == F(1, 4)
    print("✓ μ, ν, ε 测试通过")

    data = cones(cxp2(3, 2))
    assert set(data.cones) == {"eff", "mov", "nef"}
    with pytest.raises(UnsupportedFamilyError):
        cones(ccc(1, 1, 1))
    print("✓ 锥数据测试通过")


def run_all_tests():
    """运行所有测试"""
    print("开始运行所有测试...\n")

    try:
        test_families()
        print()

        test_towers()
        print()

        test_psigma()
        print()

        test_volumes()
        print()

        test_nef()
        print()

        test_thresholds()
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
