"""
基本功能测试

测试数据加载、表格导出、图表数据、运行配置与工具函数
"""

import sys
import os
import json
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from data_processing import DataLoader, intersection_table, restriction_table, table_to_csv
from okounkov import body, slice_at
from threefold import ccc, cxjac, family_tower, volume_curve
from utils.config import DEFAULT_DATA_DIR, load_settings
from utils.errors import DataFileError, NOBodyError
from utils.helpers import (
    env_from_pairs,
    format_class,
    format_rational,
    parse_rational,
    parse_rational_list,
    random_rational_points,
    random_rationals,
    rational_from_json,
    rational_to_json,
)
from visualization.plots import BodyPlotter

F = Fraction


def test_data_loader():
    """测试数据加载器"""
    print("测试数据加载器...")

    loader = DataLoader()
    assert "genus2_jacobian" in loader.list_models('surfaces')
    assert loader.list_models('towers') == ["ccc_tower", "cxjac_tower", "cxp2_tower"]
    payload = loader.load_surface("genus2_jacobian")
    assert loader.validate_surface_data(payload)
    assert not loader.validate_surface_data({"name": "x", "basis": ["a"], "pairing": [[1, 2]]})
    print("✓ 模型列表与数据验证测试通过")

    with tempfile.TemporaryDirectory() as tmp:
        folder = Path(tmp) / "surfaces"
        folder.mkdir()
        (folder / "broken.json").write_text("{", encoding="utf-8")
        (folder / "partial.json").write_text(json.dumps({"name": "partial"}), encoding="utf-8")
        tmp_loader = DataLoader(tmp)
        with pytest.raises(DataFileError):
            tmp_loader.load_surface("broken")
        with pytest.raises(DataFileError):
            tmp_loader.load_surface("partial")
        with pytest.raises(DataFileError):
            tmp_loader.load_from_file(Path(tmp) / "model.yaml")
    print("✓ 损坏、缺字段与格式错误报错测试通过")


def test_tables():
    """测试表格导出"""
    print("测试表格导出...")

    tower = family_tower(cxjac(F(1, 2)))
    df = restriction_table(tower)
    assert list(df.index) == list(tower.top.basis)
    assert list(df.columns) == [comp.name for comp in tower.top.components]
    assert df.index.name == tower.top.name
    print("✓ 限制表测试通过")

    table = intersection_table()
    assert table.shape == (8, 7)
    assert table.loc["2L+16H+G", "L7"] == "96"
    print("✓ 交数表测试通过")

    curve = volume_curve(ccc(1, 1, 1), F(3, 2))
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "vol.csv"
        text = table_to_csv(curve, path, index=False)
        assert path.read_text(encoding="utf-8") == text
    assert text == "t,vol\n0,6\n3/2,3\n3,0\n"
    print("✓ CSV导出测试通过")


def test_plotter():
    """测试图表数据生成"""
    print("测试图表数据生成...")

    plotter = BodyPlotter()
    fig = plotter.plot_body(body(ccc(1, 1, 1)))
    payload = plotter.to_dict(fig)
    assert [trace['type'] for trace in payload['data']] == ['mesh3d', 'scatter3d']
    assert len(fig.data[1].x) == 4
    print("✓ 三维体图表测试通过")

    section = slice_at(ccc(1, 1, 1), F(3, 2))
    fig = plotter.plot_slice(section.polygon, section.t)
    trace = plotter.to_dict(fig)['data'][0]
    # 闭合环
    assert len(trace['x']) == 5
    assert trace['x'][0] == trace['x'][-1]
    print("✓ 截面图表测试通过")

    fig = plotter.plot_curve(volume_curve(ccc(1, 1, 1), 1), 'vol')
    trace = plotter.to_dict(fig)['data'][0]
    assert list(trace['y']) == [6.0, 5.0, 1.0, 0.0]
    assert json.loads(plotter.to_json(fig)) == plotter.to_dict(fig)
    print("✓ 曲线图表测试通过")


def test_settings():
    """测试运行配置"""
    print("测试运行配置...")

    settings = load_settings({})
    assert settings.threads == 1
    assert settings.data_dir == DEFAULT_DATA_DIR
    settings = load_settings({"NOBODY_THREADS": "4", "NOBODY_SEED": "7", "NOBODY_DATA_DIR": "/tmp/nobody"})
    assert (settings.threads, settings.seed, settings.data_dir) == (4, 7, Path("/tmp/nobody"))
    with pytest.raises(NOBodyError):
        load_settings({"NOBODY_THREADS": "many"})
    with pytest.raises(NOBodyError):
        load_settings({"NOBODY_THREADS": "0"})
    print("✓ 环境变量配置测试通过")


def test_helpers():
    """测试工具函数"""
    print("测试工具函数...")

    assert parse_rational("-3/4") == F(-3, 4)
    assert parse_rational(" 5 ") == 5
    assert parse_rational_list("1, 3/2,2") == [F(1), F(3, 2), F(2)]
    for bad in ("0.5", "1/0", "a", ""):
        with pytest.raises(NOBodyError):
            parse_rational(bad)
    with pytest.raises(NOBodyError):
        parse_rational(True)
    print("✓ 有理数解析测试通过")

    assert format_rational(F(6, 4)) == "3/2"
    assert format_rational(F(-2)) == "-2"
    assert format_class((F(2), F(0), F(-1)), ["theta", "f", "E"]) == "2*theta - E"
    assert format_class((F(-1, 2), F(1)), ["a", "b"]) == "-1/2*a + b"
    assert format_class((F(0), F(0)), ["a", "b"]) == "0"
    assert rational_from_json(rational_to_json(F(-7, 3))) == F(-7, 3)
    assert rational_from_json("7/3") == F(7, 3)
    assert env_from_pairs([("s", "1/2"), ("t", 1)]) == {"s": F(1, 2), "t": F(1)}
    print("✓ 格式化与序列化测试通过")

    rng = np.random.default_rng(0)
    samples = random_rationals(rng, 0, F(5, 4), 50, max_denominator=13)
    assert all(0 < x < F(5, 4) for x in samples)
    with pytest.raises(NOBodyError):
        random_rationals(rng, 1, 1, 3)
    points = random_rational_points(rng, [(0, 0), (1, 0), (0, 1)], 50)
    assert all(x > 0 and y > 0 and x + y < 1 for x, y in points)
    print("✓ 随机有理数采样测试通过")


def run_all_tests():
    """运行所有测试"""
    print("开始运行所有测试...\n")

    try:
        test_data_loader()
        print()

        test_tables()
        print()

        test_plotter()
        print()

        test_settings()
        print()

        test_helpers()
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
