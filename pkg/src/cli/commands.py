"""
命令行接口

子命令 zariski / volume / body / slice / glue / cone / seshadri / check / table，
输出 JSON、OFF、CSV 或 plotly 图表数据
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from data_processing import intersection_table, restriction_table, table_to_csv
from okounkov import (
    NOBody,
    body,
    generator_bounds,
    glue4d,
    projection_area_check,
    seshadri_curve,
    slice_area_curve,
    slice_at,
)
from ratgeom import minimize, polytope_to_off, project, to_hpoly
from surface import load_surface, polarization, zariski
from threefold import (
    FAMILY_PARAMETERS,
    ModelFamily,
    cones,
    family_tower,
    normalize_kind,
    thresholds,
    vol_ray,
    volume_curve,
    volume_pieces,
)
from utils.config import load_settings
from utils.errors import (
    ConsistencyError,
    MissingParameterError,
    NOBodyError,
    ParameterRangeError,
    UnsupportedFamilyError,
)
from utils.helpers import format_class, format_rational, parse_rational, parse_rational_list, setup_logging
from visualization import BodyPlotter

from .checks import TIERS, format_report, run_checks

logger = logging.getLogger(__name__)

FORMATS = ("json", "off", "csv", "plotly")
USAGE_ERRORS = (ParameterRangeError, MissingParameterError, UnsupportedFamilyError)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except NOBodyError as e:
        raise argparse.ArgumentTypeError(str(e))


def _rational_list(text: str) -> List[Fraction]:
    try:
        return parse_rational_list(text)
    except NOBodyError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_family_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--family", required=required, help="模型族: cxp2 / ccc / cxjac")
    parser.add_argument("--a", type=_rational, help="CxP2 参数 a")
    parser.add_argument("--b", type=_rational, help="CxP2 参数 b")
    parser.add_argument("--d", type=_rational_list, help="CCC 参数 d1,d2,d3 (或曲面模型参数)")
    parser.add_argument("--s", type=_rational, help="CxJac 参数 s")


def _add_output_args(parser: argparse.ArgumentParser, formats: Sequence[str], default: str = "json") -> None:
    parser.add_argument("--format", choices=list(formats), default=default, help="输出格式")
    parser.add_argument("--output", type=Path, help="输出文件路径，默认标准输出")


def _params(args: argparse.Namespace) -> Dict[str, Fraction]:
    out = {}
    for name in ("a", "b", "s"):
        value = getattr(args, name, None)
        if value is not None:
            out[name] = value
    for k, value in enumerate(getattr(args, "d", None) or [], start=1):
        out[f"d{k}"] = value
    return out


def _family(args: argparse.Namespace) -> ModelFamily:
    kind = normalize_kind(args.family)
    params = {k: v for k, v in _params(args).items() if k in FAMILY_PARAMETERS[kind]}
    return ModelFamily.create(kind, **params)


def _body_payload(nobody: NOBody) -> Dict:
    payload = nobody.to_dict()
    payload["volume"] = format_rational(nobody.volume())
    return payload


def _dump(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# 子命令
# ---------------------------------------------------------------------------

def cmd_zariski(args: argparse.Namespace) -> str:
    model = load_surface(args.model)
    if args.cls:
        d = model.parse_class(args.cls, _params(args))
    else:
        pol = polarization(model)
        params = _params(args)
        d = pol.divisor(params)
        if args.t is not None:
            threshold = pol.threshold(params)
            if not 0 <= args.t <= threshold:
                raise ParameterRangeError(f"t = {args.t} 不在 [0, {threshold}] 内")
            d = tuple(a - args.t * b for a, b in zip(d, pol.direction()))
    decomp = zariski(model, d)
    return _dump({
        "model": model.name,
        "class": format_class(d, model.basis),
        "positive": format_class(decomp.positive, model.basis),
        "negative": {name: format_rational(c) for name, c in decomp.negative},
        "support": list(decomp.support),
        "positive_square": format_rational(model.square(decomp.positive)),
    })


def cmd_volume(args: argparse.Namespace) -> str:
    family = _family(args)
    if args.t is not None:
        return format_rational(vol_ray(family, args.t)) + "\n"
    if args.step is not None:
        df = volume_curve(family, args.step)
        if args.format == "csv":
            return table_to_csv(df, index=False)
        if args.format == "plotly":
            plotter = BodyPlotter()
            return plotter.to_json(plotter.plot_curve(df, 'vol', f'{family.label()} 体积')) + "\n"
        return _dump(df.to_dict(orient="records"))
    pieces = [{"lo": format_rational(p.lo), "hi": format_rational(p.hi), "polynomial": str(p.polynomial)}
              for p in volume_pieces(family)]
    return _dump({"family": family.label(), "pieces": pieces})


def cmd_body(args: argparse.Namespace) -> str:
    nobody = body(_family(args))
    if args.format == "off":
        return polytope_to_off(nobody.vrep)
    if args.format == "plotly":
        plotter = BodyPlotter()
        return plotter.to_json(plotter.plot_body(nobody)) + "\n"
    if args.format == "csv":
        raise ParameterRangeError("body 不支持 csv 输出")
    return _dump(_body_payload(nobody))


def cmd_slice(args: argparse.Namespace) -> str:
    family = _family(args)
    if args.step is not None:
        df = slice_area_curve(family, args.step)
        if args.format == "plotly":
            plotter = BodyPlotter()
            return plotter.to_json(plotter.plot_curve(df, 'area', f'{family.label()} 截面面积')) + "\n"
        if args.format == "json":
            return _dump(df.to_dict(orient="records"))
        return table_to_csv(df, index=False)
    if args.t is None:
        raise MissingParameterError("slice 需要 --t 或 --step")
    section = slice_at(family, args.t)
    if args.format == "plotly":
        plotter = BodyPlotter()
        return plotter.to_json(plotter.plot_slice(section.polygon, section.t)) + "\n"
    if args.format != "json":
        raise ParameterRangeError(f"slice --t 不支持 {args.format} 输出")
    return _dump({
        "family": family.label(),
        "t": format_rational(section.t),
        "vertices": [[format_rational(a) for a in v] for v in section.vertices],
        "area": format_rational(section.area()),
    })


def cmd_glue(args: argparse.Namespace) -> str:
    glue = glue4d(normalize_kind(args.family))
    if args.format == "plotly":
        shadow = minimize(project(glue.vrep, [1, 2, 3]))
        view = NOBody(3, shadow, to_hpoly(shadow), glue.variables[1:], f"{glue.label} 投影")
        plotter = BodyPlotter()
        return plotter.to_json(plotter.plot_body(view)) + "\n"
    if args.format != "json":
        raise ParameterRangeError(f"glue 不支持 {args.format} 输出")
    return _dump(_body_payload(glue))


def cmd_cone(args: argparse.Namespace) -> str:
    family = _family(args)
    data = cones(family)
    payload = {
        "family": family.label(),
        "stage": data.stage,
        "generators": {kind: [text for text, _ in gens] for kind, gens in data.generators.items()},
        "thresholds": {k: format_rational(v) for k, v in thresholds(family).items()},
    }
    return _dump(payload)


def cmd_seshadri(args: argparse.Namespace) -> str:
    family = _family(args)
    bounds = [{"name": b.name, "degree": format_rational(b.degree), "multiplicity": format_rational(b.multiplicity),
               "bound": None if b.bound is None else format_rational(b.bound)}
              for b in generator_bounds(family)]
    payload = {
        "family": family.label(),
        "epsilon": format_rational(seshadri_curve(family)),
        "generators": bounds,
        "projection": projection_area_check(family).to_dict(),
    }
    return _dump(payload)


def cmd_table(args: argparse.Namespace) -> str:
    if args.kind == "intersection":
        df = intersection_table()
    else:
        if not args.family:
            raise MissingParameterError("限制表需要 --family")
        df = restriction_table(family_tower(_family(args)), args.stage)
    if args.format == "json":
        return _dump(json.loads(df.to_json(orient="split")))
    return table_to_csv(df)


def cmd_check(args: argparse.Namespace) -> str:
    results = run_checks(args.tier, load_settings())
    report = format_report(results)
    failed = [r for r in results if not r.passed]
    if failed:
        raise ConsistencyError(report + f"{len(failed)} 项检查失败")
    return report


def build_parser() -> argparse.ArgumentParser:
    """构造参数解析器"""
    parser = argparse.ArgumentParser(prog="nobody", description="精确有理数的 Fujita–Zariski 分解与 Newton–Okounkov 体工具")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zariski", help="曲面模型的 Zariski 分解")
    p.add_argument("--model", required=True, help="数据目录中的曲面模型名")
    p.add_argument("--class", dest="cls", help="除子类表达式，例如 \"theta - 7/5*E\"")
    p.add_argument("--d", type=_rational_list, help="极化参数 d1,d2")
    p.add_argument("--t", type=_rational, help="沿旗曲线的参数 t")
    _add_output_args(p, ("json",))
    p.set_defaults(handler=cmd_zariski)

    p = sub.add_parser("volume", help="vol(L_t)：单点取值、采样曲线或逐段多项式")
    _add_family_args(p)
    p.add_argument("--t", type=_rational, help="参数 t")
    p.add_argument("--step", type=_rational, help="采样步长")
    _add_output_args(p, ("json", "csv", "plotly"))
    p.set_defaults(handler=cmd_volume)

    p = sub.add_parser("body", help="三维 Newton–Okounkov 体")
    _add_family_args(p)
    _add_output_args(p, FORMATS)
    p.set_defaults(handler=cmd_body)

    p = sub.add_parser("slice", help="体在 ν₁ = t 处的截面")
    _add_family_args(p)
    p.add_argument("--t", type=_rational, help="参数 t")
    p.add_argument("--step", type=_rational, help="截面面积曲线的采样步长")
    _add_output_args(p, ("json", "csv", "plotly"))
    p.set_defaults(handler=cmd_slice)

    p = sub.add_parser("glue", help="四维粘合体 (cxp2 / cxjac)")
    p.add_argument("--family", required=True, help="模型族")
    _add_output_args(p, ("json", "plotly"))
    p.set_defaults(handler=cmd_glue)

    p = sub.add_parser("cone", help="第一级爆破上的锥与阈值 μ, ν, ε")
    _add_family_args(p)
    _add_output_args(p, ("json",))
    p.set_defaults(handler=cmd_cone)

    p = sub.add_parser("seshadri", help="曲线类 Seshadri 常数与投影面积比较")
    _add_family_args(p)
    _add_output_args(p, ("json",))
    p.set_defaults(handler=cmd_seshadri)

    p = sub.add_parser("check", help="运行验收检查")
    p.add_argument("--tier", action="append", choices=list(TIERS), help="检查层，可重复；默认全部")
    p.set_defaults(handler=cmd_check, format="text", output=None)

    p = sub.add_parser("table", help="限制表或交数表")
    p.add_argument("--kind", choices=["restriction", "intersection"], required=True)
    _add_family_args(p, required=False)
    p.add_argument("--stage", help="塔的级名，默认最高一级")
    _add_output_args(p, ("csv", "json"), default="csv")
    p.set_defaults(handler=cmd_table)
    return parser


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    output.write_text(text, encoding="utf-8")
    logger.info("已写入 %s", output)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    运行命令行

    Args:
        argv: 参数列表，默认 sys.argv[1:]

    Returns:
        int: 退出码；0 成功，2 用法或参数错误，1 一致性失败
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    setup_logging(logging.DEBUG if args.verbose else None)
    try:
        text = args.handler(args)
    except USAGE_ERRORS as e:
        sys.stderr.write(f"{parser.prog} {args.command}: 错误: {e}\n")
        return 2
    except ConsistencyError as e:
        sys.stderr.write(f"{e}\n")
        return 1
    except NOBodyError as e:
        sys.stderr.write(f"{parser.prog} {args.command}: {e}\n")
        return 1
    _emit(text, args.output)
    return 0


def main() -> None:
    sys.exit(run())
