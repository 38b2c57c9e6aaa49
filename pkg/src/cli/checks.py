"""
分层验收检查

kernel: 多面体内核与分段线性函数的随机性质
surfaces: 曲面模型的 Zariski 分解、NO 多边形与七点配置
threefolds: 三维族的体积、nef 判定与锥阈值
paper: 三维体、截面、四维粘合体与 Seshadri 常数的全部精确数值
"""

import logging
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from okounkov import (
    body,
    check_body,
    carrier_corrections,
    final_inequalities_cxjac,
    final_inequalities_cxjac_4d,
    glue4d,
    glue_family,
    projection_area_check,
    seshadri_curve,
    slice_at,
)
from pwl import branches
from ratgeom import (
    HPoly,
    QCone,
    VPoly,
    dual_cone,
    equal_sets,
    hrep_to_vrep,
    vertex_diff,
    volume,
    vrep_to_hrep,
)
from ratgeom.linalg import affine_rank, scale, sub, unit
from surface import (
    blowup_point,
    load_surface,
    nobody_surface,
    p2blow7_symmetric_cones,
    p2blow7_symmetric_model,
    polarization,
    projective_plane,
    ruled_cones,
    ruled_surface,
    zariski,
)
from threefold import (
    ModelFamily,
    ccc,
    check_thresholds,
    cxjac,
    cxp2,
    family_tower,
    mu,
    negative_part_certificates,
    psigma,
    verify_nef3,
    verify_psigma_nef,
    vol_ray,
    volume_breakpoints,
    volume_pieces,
)
from utils.config import Settings, load_settings
from utils.errors import ConsistencyError, NOBodyError
from utils.helpers import format_vector, random_rational_points, random_rationals

logger = logging.getLogger(__name__)

TIERS = ("kernel", "surfaces", "threefolds", "paper")

KERNEL_INSTANCES = 200
BRANCH_SAMPLES = 1000
ZARISKI_SAMPLES = 100
VOLUME_SAMPLES = 50
NEF_PARAMETER_POINTS = 20
NEF_INTERIOR_SAMPLES = 10
SLICE_SAMPLES = 10
CXJAC_T0_SAMPLES = 20

CXP2_HULLS = {
    (3, 2): [(0, 0, 0), (5, 0, 0), (3, 2, 0), (2, 2, 0), (2, 0, 2), (5, 0, 2)],
    (1, 1): [(0, 0, 0), (2, 0, 0), (1, 1, 0), (1, 0, 1), (2, 0, 1)],
    (2, 3): [(0, 0, 0), (5, 0, 0), (3, 2, 0), (2, 2, 0), (3, 0, 3), (5, 0, 3), (3, 2, 1)],
}
CCC_NINE_POINTS = [(0, 0, 0), (2, 2, 0), (5, 0, 5), (9, 0, 0), (6, 0, 5), (7, 0, 4), (3, 2, 1), (4, 2, 1), (5, 2, 0)]
CCC_TETRAHEDRON = [(0, 0, 0), (3, 0, 0), (1, 1, 0), (2, 0, 2)]
CXJAC_VERTICES = [
    (0, 0, 0), (Fraction(1, 2), Fraction(1, 2), 0), (Fraction(3, 4), 0, Fraction(3, 4)), (Fraction(5, 4), 0, 0),
    (Fraction(7, 6), 0, Fraction(3, 4)), (Fraction(29, 42), Fraction(10, 21), Fraction(3, 14)),
    (Fraction(2, 3), Fraction(1, 2), Fraction(1, 6)), (Fraction(11, 16), Fraction(1, 2), 0),
]
CXP2_GLUE = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (1, 1, 0, 1),
             (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 0)]
CXJAC_GLUE = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, Fraction(3, 2), 0, 0), (1, Fraction(4, 3), 0, Fraction(4, 3)),
              (Fraction(3, 7), Fraction(4, 7), Fraction(4, 7), 0), (Fraction(6, 7), Fraction(9, 7), 0, Fraction(9, 7))]


@dataclass(frozen=True)
class Check:
    tier: str
    name: str
    run: Callable[[np.random.Generator], None]


@dataclass(frozen=True)
class CheckResult:
    """
    单项检查结果

    Args:
        tier: 层名
        name: 检查名
        passed: 是否通过
        detail: 失败时的差异说明
    """

    tier: str
    name: str
    passed: bool
    detail: str = ""

    @property
    def key(self) -> Tuple[int, str]:
        return TIERS.index(self.tier), self.name


def _expect(actual, expected, what: str) -> None:
    if actual != expected:
        raise ConsistencyError(f"{what}: 期望 {expected}，实际 {actual}")


def _expect_vertices(p, expected: Sequence[Sequence], what: str) -> None:
    diff = vertex_diff(p, expected)
    if diff['missing'] or diff['extra']:
        missing = ", ".join(format_vector(v) for v in diff['missing'])
        extra = ", ".join(format_vector(v) for v in diff['extra'])
        raise ConsistencyError(f"{what}: 缺少顶点 [{missing}]，多出顶点 [{extra}]")


def _random_points(rng: np.random.Generator, dim: int, count: int) -> List[Tuple[Fraction, ...]]:
    nums = rng.integers(-6, 7, size=(count, dim))
    dens = rng.integers(1, 5, size=(count, dim))
    return [tuple(Fraction(int(n), int(d)) for n, d in zip(row, drow)) for row, drow in zip(nums, dens)]


def _random_family(kind: str, rng: np.random.Generator) -> ModelFamily:
    if kind == "CxP2":
        a, b = random_rationals(rng, 0, 4, 2, max_denominator=7)
        return cxp2(a, b)
    if kind == "CCC":
        d1, d2, d3 = sorted(random_rationals(rng, 0, 4, 3, max_denominator=7), reverse=True)
        return ccc(d1, d2, d3)
    s, = random_rationals(rng, 0, 1, 1, max_denominator=13)
    return cxjac(s)


def _random_t(family: ModelFamily, rng: np.random.Generator, count: int) -> List[Fraction]:
    return random_rationals(rng, 0, mu(family), count, max_denominator=29)


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

def check_roundtrip(rng: np.random.Generator) -> None:
    """V → H → V 得到同一集合，且极小顶点取自输入点"""
    for k in range(KERNEL_INSTANCES):
        dim = 2 + k % 4
        points = _random_points(rng, dim, dim + 4)
        v = VPoly(dim, tuple(points))
        h = vrep_to_hrep(v)
        back = hrep_to_vrep(h)
        if not equal_sets(v, back):
            raise ConsistencyError(f"往返不一致: {points}")
        if not set(back.vertices) <= set(points):
            raise ConsistencyError(f"极小顶点不在输入点中: {points}")


def check_duality(rng: np.random.Generator) -> None:
    """对偶锥的对偶等于原锥"""
    for k in range(KERNEL_INSTANCES):
        dim = 2 + k % 4
        rays = []
        for p in _random_points(rng, dim, dim + 3):
            rays.append((abs(p[0]) + 1,) + p[1:])
        cone = QCone(dim, tuple(rays))
        if not equal_sets(cone, dual_cone(dual_cone(cone))):
            raise ConsistencyError(f"对偶不是对合: {rays}")


def check_volume_additivity(rng: np.random.Generator) -> None:
    """沿第一个坐标切开后两部分体积之和不变"""
    for k in range(KERNEL_INSTANCES):
        dim = 2 + k % 4
        points = _random_points(rng, dim, dim + 4)
        if affine_rank(points) < dim:
            continue
        h = vrep_to_hrep(VPoly(dim, tuple(points)))
        xs = sorted(p[0] for p in points)
        cut = (xs[0] + xs[-1]) / 2
        e0 = unit(dim, 0)
        upper = volume(h.with_inequality(e0, cut))
        lower = volume(h.with_inequality(scale(Fraction(-1), e0), -cut))
        _expect(upper + lower, volume(h), f"体积可加性 {points}")


def check_ledger_branches(rng: np.random.Generator) -> None:
    """C×Jac 账本各系数在 (s, t) 随机点上等于所在胞腔的活跃形式"""
    tower = family_tower(cxjac(Fraction(1, 2)))
    variables = ("s", "t")
    domain = HPoly(2, (
        ((Fraction(1), Fraction(0)), Fraction(0)),
        ((Fraction(-1), Fraction(0)), Fraction(-1)),
        ((Fraction(0), Fraction(1)), Fraction(0)),
        ((Fraction(1, 2), Fraction(-1)), Fraction(-1)),
    ))
    corners = hrep_to_vrep(domain).vertices
    points = random_rational_points(rng, corners, BRANCH_SAMPLES)
    for name in tower.ledger.names:
        expr = tower.ledger.resolve(name)
        if not expr.variables() or not expr.variables() <= set(variables):
            continue
        cells = branches(expr, domain, variables)
        for point in points:
            env = dict(zip(variables, point))
            cell = next((c for c in cells if c.guard.contains(point)), None)
            if cell is None:
                raise ConsistencyError(f"账本 {name}: 点 {point} 不在任何胞腔中")
            _expect(cell.active_form.evaluate(env), expr.evaluate(env), f"账本 {name} 在 {point}")


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------

def _surface_polygon(name: str, params: Dict[str, Fraction]) -> VPoly:
    model = load_surface(name)
    pol = polarization(model)
    return nobody_surface(model, pol.divisor(params), pol.direction())


def check_surface_polygons(rng: np.random.Generator) -> None:
    cases = [
        ("two_curves", {"d1": 3, "d2": 2}, [(0, 0), (2, 2), (3, 2), (5, 0)]),
        ("two_curves", {"d1": 1, "d2": 1}, [(0, 0), (2, 0), (1, 1)]),
        ("two_curves_diagonal", {"d1": 2, "d2": 2}, [(0, 0), (3, 3), (4, 2), (4, 0)]),
        ("genus2_jacobian", {}, [(0, 0), (Fraction(3, 2), 0), (Fraction(4, 3), Fraction(4, 3))]),
    ]
    for name, params, expected in cases:
        params = {k: Fraction(v) for k, v in params.items()}
        polygon = _surface_polygon(name, params)
        _expect_vertices(polygon, expected, f"{name} {params}")
        model = load_surface(name)
        d = polarization(model).divisor(params)
        _expect(2 * volume(polygon), model.square(zariski(model, d).positive), f"{name} 2·面积与体积")


def check_zariski_oracle(rng: np.random.Generator) -> None:
    """迭代 Zariski 分解与数据中的正部闭式一致"""
    cases = [
        ("two_curves", {"d1": 2, "d2": 1}),
        ("two_curves", {"d1": 3, "d2": 2}),
        ("two_curves_diagonal", {"d1": 2, "d2": 2}),
        ("genus2_jacobian", {}),
    ]
    for name, params in cases:
        params = {k: Fraction(v) for k, v in params.items()}
        model = load_surface(name)
        pol = polarization(model)
        d, flag = pol.divisor(params), pol.direction()
        for t in random_rationals(rng, 0, pol.threshold(params), ZARISKI_SAMPLES, max_denominator=31):
            decomp = zariski(model, sub(d, scale(t, flag)))
            _expect(decomp.positive, pol.closed_positive(params, t), f"{name} {params} t = {t} 的正部")


def check_zariski_examples(rng: np.random.Generator) -> None:
    model = load_surface("two_curves")
    d = model.parse_class("2*f1 + f2 - 3/2*E")
    decomp = zariski(model, d)
    _expect(decomp.positive, model.parse_class("3/2*fb1 + fb2 + 3/2*E"), "两条曲线 t = 3/2 的正部")
    _expect(decomp.negative_coeffs, {"fb1": Fraction(1, 2)}, "两条曲线 t = 3/2 的负部")

    jac = load_surface("genus2_jacobian")
    decomp = zariski(jac, jac.parse_class("theta - 7/5*E"))
    _expect(decomp.positive, jac.parse_class("3/5*theta - 4/5*E"), "Jacobian t = 7/5 的正部")
    _expect(tuple(decomp.negative_coeffs), ("Rbar",), "Jacobian t = 7/5 的负部支撑")
    _expect(jac.is_nef(jac.parse_class("theta - 4/3*E")), True, "θ - 4/3·E 是 nef")
    _expect(jac.is_nef(jac.parse_class("theta - 7/5*E")), False, "θ - 7/5·E 不是 nef")


def check_blowups(rng: np.random.Generator) -> None:
    plane = projective_plane()
    once = blowup_point(plane, {}, "e")
    e, h = once.class_named("e"), once.class_named("h")
    _expect((once.square(h), once.square(e), once.dot(h, e)), (1, -1, 0), "P² 爆破一点的配对")
    cremona = load_surface("p2_blow_3_cremona")
    for name in ("l12", "l13", "l23"):
        _expect(cremona.square(cremona.curve(name).cls), -1, f"Cremona 直线 {name} 的自交")
    sym = p2blow7_symmetric_model()
    _expect(sym.square(sym.curve("L").cls), -11, "对称切片上 L 的自交")


def check_ruled_cones(rng: np.random.Generator) -> None:
    cases = [
        ((6, 4), {(1, -6), (0, 1)}, {(1, -4), (0, 1)}),
        ((1, 1), {(1, -1), (0, 1)}, {(1, -1), (0, 1)}),
        ((0, 0), {(1, 0), (0, 1)}, {(1, 0), (0, 1)}),
    ]
    for (d1, d2), eff_rays, nef_rays in cases:
        eff, nef = ruled_cones(ruled_surface("g2", d1, d2))
        _expect(set(eff.rays), {tuple(Fraction(a) for a in r) for r in eff_rays}, f"直纹面 ({d1}, {d2}) 的有效锥")
        _expect(set(nef.rays), {tuple(Fraction(a) for a in r) for r in nef_rays}, f"直纹面 ({d1}, {d2}) 的 nef 锥")


def check_p2blow7(rng: np.random.Generator) -> None:
    data = p2blow7_symmetric_cones()
    _expect(len(data.nef_gens), 8, "nef 生成元个数")
    _expect(sorted(name for name, _ in data.eff_gens), sorted(["L", "L7", "E", "E7", "G", "N"]), "有效生成元")
    if "2L+16(H-E7)+G" not in [name for name, _ in data.nef_gens]:
        raise ConsistencyError("nef 生成元缺少 2L+16(H-E7)+G")
    _expect(data.table_entry("2L+16H+G", "L7"), 96, "(2L+16H+G)·L7")
    _expect(data.table_entry("L+5(H-E7)+G+N", "E"), 6, "(L+5(H-E7)+G+N)·E")
    _expect(data.table_entry("L+11(H-E7)", "E7"), 11, "(L+11(H-E7))·E7")
    eff = QCone(len(data.pairing), tuple(cls for _, cls in data.eff_gens))
    if not equal_sets(data.nef_ineqs, dual_cone(eff, data.pairing)):
        raise ConsistencyError("nef 不等式组与有效锥的对偶不一致")


# ---------------------------------------------------------------------------
# threefolds
# ---------------------------------------------------------------------------

def check_volume_oracle(rng: np.random.Generator) -> None:
    """vol_ray 内部比较闭式与 (P³)，这里遍历随机参数"""
    for kind in ("CxP2", "CCC", "CxJac"):
        for _ in range(VOLUME_SAMPLES):
            family = _random_family(kind, rng)
            t, = _random_t(family, rng, 1)
            vol_ray(family, t)


def check_ccc_pieces(rng: np.random.Generator) -> None:
    family = ccc(1, 1, 1)
    values = [vol_ray(family, t) for t in range(4)]
    _expect(values, [6, 5, 1, 0], "CCC(1,1,1) 在 t = 0..3 的体积")
    pieces = volume_pieces(family)
    expected = [(0, 1, lambda t: 6 - t ** 3), (1, 2, lambda t: 2 * t ** 3 - 9 * t ** 2 + 9 * t + 3),
                (2, 3, lambda t: (3 - t) ** 3)]
    _expect(len(pieces), 3, "CCC(1,1,1) 的体积段数")
    for piece, (lo, hi, f) in zip(pieces, expected):
        _expect((piece.lo, piece.hi), (lo, hi), "体积段端点")
        for t in (Fraction(lo), Fraction(2 * lo + hi, 3), Fraction(hi)):
            _expect(piece.at(t), f(t), f"体积段 [{lo}, {hi}] 在 t = {t}")


def check_cxjac_t0(rng: np.random.Generator) -> None:
    for s in random_rationals(rng, 0, 1, CXJAC_T0_SAMPLES, max_denominator=23):
        _expect(vol_ray(cxjac(s), 0), 6 * s * s * (1 - s), f"C×Jac s = {s} 在 t = 0 的体积")
    _expect(vol_ray(cxjac(Fraction(1, 2)), 0), Fraction(3, 4), "C×Jac s = 1/2 的体积")


def _nef_samples(family: ModelFamily) -> List[Fraction]:
    points = volume_breakpoints(family)
    out = list(points)
    for lo, hi in zip(points, points[1:]):
        out.extend(lo + (hi - lo) * k / (NEF_INTERIOR_SAMPLES + 1) for k in range(1, NEF_INTERIOR_SAMPLES + 1))
    return sorted(set(out))


def check_fujita_zariski(rng: np.random.Generator) -> None:
    """顶层正部在整个 t 区间上 nef"""
    for kind in ("CxP2", "CCC", "CxJac"):
        for _ in range(NEF_PARAMETER_POINTS):
            family = _random_family(kind, rng)
            for t in _nef_samples(family):
                verdict = verify_psigma_nef(family, t)
                if not verdict.is_nef:
                    raise ConsistencyError(f"{family.label()} t = {t}: 正部判定为 {verdict.status} "
                                           f"(曲线 {list(verdict.failing_curves)})")


def check_not_nef(rng: np.random.Generator) -> None:
    for (a, b), curve in (((3, 2), "P1x"), ((2, 3), "Cx")):
        family = cxp2(a, b)
        decomp = psigma(family, Fraction(5, 2))
        verdict = verify_nef3(family_tower(family).top, decomp.polarization.cls)
        _expect(verdict.status, "not_nef", f"{family.label()} t = 5/2 的 L_t")
        if curve not in verdict.failing_curves:
            raise ConsistencyError(f"{family.label()}: 失败曲线 {list(verdict.failing_curves)} 不含 {curve}")
    verdict = verify_nef3(family_tower(cxp2(3, 2)).top, psigma(cxp2(3, 2), Fraction(5, 2)).polarization.cls)
    if "Cx" in verdict.failing_curves:
        raise ConsistencyError("CxP2(3, 2) t = 5/2 时 Cx 不应失败")


def check_thresholds_all(rng: np.random.Generator) -> None:
    for kind in ("CxP2", "CxJac"):
        for _ in range(5):
            check_thresholds(_random_family(kind, rng))
    values = check_thresholds(cxp2(3, 2))
    _expect((values["mu"], values["nu"], values["epsilon"]), (5, 2, 2), "CxP2(3, 2) 的 μ, ν, ε")
    values = check_thresholds(cxjac(Fraction(1, 2)))
    _expect((values["mu"], values["nu"], values["epsilon"]),
            (Fraction(5, 4), Fraction(3, 4), Fraction(1, 2)), "C×Jac(1/2) 的 μ, ν, ε")


def check_negative_certificates(rng: np.random.Generator) -> None:
    for family in (cxp2(3, 2), cxp2(2, 3), ccc(4, 3, 2), cxjac(Fraction(1, 2)), cxjac(Fraction(1, 4))):
        top = mu(family)
        for t in (top / 4, top / 2, 3 * top / 4):
            for cert in negative_part_certificates(family, t):
                if not cert.certified:
                    raise ConsistencyError(f"{family.label()} t = {t}: 分量 {cert.component} 的负部证书失败")


# ---------------------------------------------------------------------------
# paper
# ---------------------------------------------------------------------------

def check_bodies(rng: np.random.Generator) -> None:
    for (a, b), expected in CXP2_HULLS.items():
        nobody = body(cxp2(a, b))
        check_body(nobody)
        _expect_vertices(nobody.vrep, expected, nobody.label)
        _expect(6 * nobody.volume(), 3 * a * b * b, f"{nobody.label} 的 6·体积")
    for d, expected in (((4, 3, 2), CCC_NINE_POINTS), ((1, 1, 1), CCC_TETRAHEDRON)):
        nobody = body(ccc(*d))
        check_body(nobody)
        _expect_vertices(nobody.vrep, expected, nobody.label)
        _expect(6 * nobody.volume(), 6 * d[0] * d[1] * d[2], f"{nobody.label} 的 6·体积")
    s = Fraction(1, 2)
    nobody = body(cxjac(s))
    check_body(nobody)
    _expect_vertices(nobody.vrep, CXJAC_VERTICES, nobody.label)
    _expect(6 * nobody.volume(), 6 * s * s * (1 - s), f"{nobody.label} 的 6·体积")
    for s in (Fraction(1, 4), Fraction(3, 7), Fraction(1, 2), Fraction(5, 6)):
        if not equal_sets(body(cxjac(s)).hrep, final_inequalities_cxjac(s)):
            raise ConsistencyError(f"C×Jac s = {s}: 组装的体与闭式不等式组不一致")


def check_slice_bridge(rng: np.random.Generator) -> None:
    """6·vol(体 ∩ {ν₁ ≥ t}) = vol(L_t)，体的截面等于载体上的截面"""
    for family in (cxp2(3, 2), cxp2(2, 3), ccc(4, 3, 2), cxjac(Fraction(1, 2))):
        nobody = body(family)
        for t in _random_t(family, rng, SLICE_SAMPLES):
            _expect(6 * nobody.upper_volume(t), vol_ray(family, t), f"{family.label()} t = {t} 的上部体积")
            section = nobody.slice(t)
            if section is None or not equal_sets(section, slice_at(family, t).polygon):
                raise ConsistencyError(f"{family.label()} t = {t}: 体的截面与载体截面不一致")


def check_glues(rng: np.random.Generator) -> None:
    glue = glue4d("CxP2")
    _expect_vertices(glue.vrep, CXP2_GLUE, glue.label)
    glue = glue4d("CxJac")
    _expect_vertices(glue.vrep, CXJAC_GLUE, glue.label)
    _expect(glue.volume(), Fraction(1, 12), "C×Jac 粘合体的体积")
    if not equal_sets(glue.hrep, final_inequalities_cxjac_4d()):
        raise ConsistencyError("C×Jac 粘合体与四维闭式不等式组不一致")
    for kind in ("CxP2", "CxJac"):
        glue = glue4d(kind)
        for s in (Fraction(1, 7), Fraction(3, 7), Fraction(1, 2), Fraction(5, 6)):
            section = glue.slice(s)
            if section is None or not equal_sets(section, body(glue_family(kind, s)).vrep):
                raise ConsistencyError(f"{glue.label} 在 s = {s} 处的截面与三维体不一致")


def check_seshadri(rng: np.random.Generator) -> None:
    cases = [
        (cxp2(3, 2), Fraction(4), "equality"),
        (cxp2(2, 2), Fraction(4), "equality"),
        (cxp2(1, 3), Fraction(6), None),
        (ccc(1, 1, 1), Fraction(2), "equality"),
        (ccc(4, 3, 2), Fraction(12), "equality"),
        (cxjac(Fraction(1, 2)), Fraction(1, 2), "strict"),
        (cxjac(Fraction(3, 7)), Fraction(18, 49), "equality"),
        (cxjac(Fraction(1, 4)), Fraction(1, 8), "equality"),
    ]
    for family, value, verdict in cases:
        _expect(seshadri_curve(family), value, f"{family.label()} 的 ε((L²); x)")
        if verdict is not None:
            _expect(projection_area_check(family).verdict, verdict, f"{family.label()} 的投影面积比较")
    _expect(projection_area_check(cxjac(Fraction(1, 2))).rhs, Fraction(59, 126), "C×Jac(1/2) 的 2·投影面积")


def check_carrier(rng: np.random.Generator) -> None:
    family = cxjac(Fraction(1, 2))
    for t, x in ((Fraction(3, 4), Fraction(1, 4)), (Fraction(1, 2), Fraction(1, 8)), (Fraction(1), Fraction(1, 10))):
        carrier_corrections(family, t, x)


def all_checks() -> List[Check]:
    """全部检查，按层与名称排序"""
    table = {
        "kernel": [("roundtrip", check_roundtrip), ("duality", check_duality),
                   ("volume_additivity", check_volume_additivity), ("ledger_branches", check_ledger_branches)],
        "surfaces": [("polygons", check_surface_polygons), ("zariski_oracle", check_zariski_oracle),
                     ("zariski_examples", check_zariski_examples), ("blowups", check_blowups),
                     ("ruled_cones", check_ruled_cones), ("p2blow7", check_p2blow7)],
        "threefolds": [("volume_oracle", check_volume_oracle), ("ccc_pieces", check_ccc_pieces),
                       ("cxjac_t0", check_cxjac_t0), ("fujita_zariski", check_fujita_zariski),
                       ("not_nef", check_not_nef), ("thresholds", check_thresholds_all),
                       ("negative_certificates", check_negative_certificates)],
        "paper": [("bodies", check_bodies), ("slice_bridge", check_slice_bridge), ("glues", check_glues),
                  ("seshadri", check_seshadri), ("carrier", check_carrier)],
    }
    out = [Check(tier, name, fn) for tier in TIERS for name, fn in table[tier]]
    return sorted(out, key=lambda c: (TIERS.index(c.tier), c.name))


def _run_one(check: Check, seed: int) -> CheckResult:
    rng = np.random.default_rng([seed, zlib.crc32(f"{check.tier}/{check.name}".encode())])
    try:
        check.run(rng)
    except NOBodyError as e:
        logger.debug("检查 %s/%s 失败: %s", check.tier, check.name, e)
        return CheckResult(check.tier, check.name, False, str(e))
    logger.info("检查 %s/%s 通过", check.tier, check.name)
    return CheckResult(check.tier, check.name, True)


def run_checks(tiers: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> List[CheckResult]:
    """
    运行检查

    Args:
        tiers: 要运行的层，默认全部
        settings: 运行配置 (线程数、随机种子)

    Returns:
        List[CheckResult]: 按层与名称排序，与执行顺序无关
    """
    settings = settings or load_settings()
    wanted = tuple(tiers) if tiers else TIERS
    unknown = [t for t in wanted if t not in TIERS]
    if unknown:
        raise NOBodyError(f"未知的检查层: {unknown}，可选 {list(TIERS)}")
    checks = [c for c in all_checks() if c.tier in wanted]
    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            results = list(pool.map(lambda c: _run_one(c, settings.seed), checks))
    else:
        results = [_run_one(c, settings.seed) for c in checks]
    return sorted(results, key=lambda r: r.key)


def format_report(results: Sequence[CheckResult]) -> str:
    """逐项报告与汇总行"""
    lines = []
    for r in results:
        mark = "✓" if r.passed else "✗"
        line = f"{mark} {r.tier}/{r.name}"
        if not r.passed:
            line += f"\n    {r.detail}"
        lines.append(line)
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - failed}/{len(results)} 项通过")
    return "\n".join(lines) + "\n"
