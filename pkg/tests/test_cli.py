"""
命令行测试

测试各子命令的输出与退出码
"""

import sys
import os
import io
import json
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from cli import CheckResult, format_report, run, run_checks
from utils.config import Settings


def _run(*argv):
    """运行命令行，返回 (退出码, 标准输出)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue()


def test_volume_command():
    """测试 volume 子命令"""
    print("测试 volume 子命令...")

    assert _run("volume", "--family", "cxjac", "--s", "1/2", "--t", "0") == (0, "3/4\n")
    assert _run("volume", "--family", "CCC", "--d", "1,1,1", "--t", "1") == (0, "5\n")
    print("✓ 单点体积测试通过")

    code, text = _run("volume", "--family", "ccc", "--d", "1,1,1", "--step", "1", "--format", "csv")
    assert code == 0
    assert text == "t,vol\n0,6\n1,5\n2,1\n3,0\n"
    code, text = _run("volume", "--family", "ccc", "--d", "1,1,1")
    payload = json.loads(text)
    assert [(p["lo"], p["hi"]) for p in payload["pieces"]] == [("0", "1"), ("1", "2"), ("2", "3")]
    print("✓ 体积曲线与逐段多项式测试通过")

    code, text = _run("volume", "--family", "ccc", "--d", "1,1,1", "--step", "1", "--format", "plotly")
    assert code == 0
    assert "data" in json.loads(text)
    print("✓ plotly 输出测试通过")


def test_body_command():
    """测试 body 子命令"""
    print("测试 body 子命令...")

    code, text = _run("body", "--family", "ccc", "--d", "1,1,1")
    assert code == 0
    payload = json.loads(text)
    assert len(payload["vertices"]) == 4
    assert payload["volume"] == "1"
    print("✓ JSON 输出测试通过")

    code, text = _run("body", "--family", "cxp2", "--a", "3", "--b", "2", "--format", "off")
    assert code == 0
    assert text.splitlines()[0] == "OFF"
    assert text.splitlines()[1].split()[0] == "6"
    print("✓ OFF 输出测试通过")

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "body.json"
        code, text = _run("body", "--family", "cxjac", "--s", "1/2", "--output", str(path))
        assert code == 0
        assert text == ""
        assert json.loads(path.read_text(encoding="utf-8"))["volume"] == "1/8"
    print("✓ 写入文件测试通过")


def test_other_commands():
    """测试其余子命令"""
    print("测试其余子命令...")

    code, text = _run("zariski", "--model", "two_curves", "--class", "2*f1 + f2 - 3/2*E")
    payload = json.loads(text)
    assert code == 0
    assert payload["positive"] == "3/2*f1 + f2 - E"
    assert payload["negative"] == {"fb1": "1/2"}
    code, text = _run("zariski", "--model", "two_curves", "--d", "3,2", "--t", "5/2")
    assert json.loads(text)["positive_square"] == "6"
    print("✓ zariski 测试通过")

    code, text = _run("slice", "--family", "ccc", "--d", "1,1,1", "--t", "3/2")
    payload = json.loads(text)
    assert payload["area"] == "3/4"
    assert len(payload["vertices"]) == 4
    code, text = _run("slice", "--family", "ccc", "--d", "1,1,1", "--step", "1", "--format", "csv")
    assert text == "t,area\n0,0\n1,1/2\n2,1/2\n3,0\n"
    print("✓ slice 测试通过")

    code, text = _run("glue", "--family", "cxjac")
    assert code == 0
    assert json.loads(text)["volume"] == "1/12"
    code, text = _run("cone", "--family", "cxp2", "--a", "3", "--b", "2")
    assert json.loads(text)["thresholds"] == {"epsilon": "2", "mu": "5", "nu": "2"}
    code, text = _run("seshadri", "--family", "cxjac", "--s", "1/2")
    payload = json.loads(text)
    assert payload["epsilon"] == "1/2"
    assert payload["projection"] == {"verdict": "strict", "lhs": "1/2", "rhs": "59/126"}
    print("✓ glue / cone / seshadri 测试通过")

    code, text = _run("table", "--kind", "restriction", "--family", "cxjac", "--s", "1/2")
    assert code == 0
    assert len(text.splitlines()) > 1
    code, text = _run("table", "--kind", "intersection", "--format", "json")
    payload = json.loads(text)
    assert len(payload["index"]) == 8
    print("✓ table 测试通过")


def test_exit_codes():
    """测试退出码"""
    print("测试退出码...")

    assert _run()[0] == 2
    assert _run("volume", "--family", "cxjac", "--s", "0.5", "--t", "0")[0] == 2
    assert _run("volume", "--family", "cxjac", "--s", "3/2", "--t", "0")[0] == 2
    assert _run("volume", "--family", "p3", "--t", "0")[0] == 2
    assert _run("volume", "--family", "ccc", "--d", "1,1,1", "--t", "4")[0] == 2
    assert _run("body", "--family", "ccc", "--d", "1,1,1", "--format", "csv")[0] == 2
    assert _run("slice", "--family", "ccc", "--d", "1,1,1")[0] == 2
    assert _run("cone", "--family", "ccc", "--d", "1,1,1")[0] == 2
    assert _run("zariski", "--model", "two_curves", "--d", "3,2", "--t", "6")[0] == 2
    assert _run("table", "--kind", "restriction")[0] == 2
    assert _run("check", "--tier", "everything")[0] == 2
    print("✓ 用法错误返回2测试通过")

    assert _run("zariski", "--model", "no_such_surface", "--class", "E")[0] == 1
    print("✓ 数据错误返回1测试通过")


def test_checks():
    """测试验收检查"""
    print("测试验收检查...")

    code, text = _run("check", "--tier", "kernel")
    assert code == 0
    assert text.splitlines()[-1] == "4/4 项通过"
    print("✓ kernel 层测试通过")

    results = run_checks(["surfaces"], Settings(threads=2))
    assert [r.tier for r in results] == ["surfaces"] * 6
    assert [r.name for r in results] == sorted(r.name for r in results)
    assert all(r.passed for r in results), format_report(results)
    print("✓ 多线程 surfaces 层测试通过")

    report = format_report([CheckResult("kernel", "roundtrip", True), CheckResult("paper", "glues", False, "差异")])
    assert report.splitlines() == ["✓ kernel/roundtrip", "✗ paper/glues", "    差异", "1/2 项通过"]
    print("✓ 报告格式测试通过")


def run_all_tests():
    """运行所有测试"""
    print("开始运行所有测试...\n")

    try:
        test_volume_command()
        print()

        test_body_command()
        print()

        test_other_commands()
        print()

        test_exit_codes()
        print()

        test_checks()
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
