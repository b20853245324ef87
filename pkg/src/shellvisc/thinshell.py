"""Thin-shell expansions around E and the replay of the limiting operators.

A field on the shell is a second-order jet in the radial variable of a chart
(r = rho - 1 in the scaling chart, r = sigma in the normal chart):

    v = sum_{alpha <= 2} r^alpha (A_alpha^1 E1 + A_alpha^2 E2 + A_alpha^3 N),

with the ray-constant frame of that chart.  Imposing a boundary condition on
E and on the outer shell fixes A_1 and A_2 from A_0 = u0.  The replay then
compares the tangential part of the Cartesian Laplacian of v (an independent
oracle) with the intrinsic operator that the scenario predicts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import fd
from .boundary import BCKind, BCTag, shape_matrix
from .fieldcalc import covariant_along, divergence_field, lie_bracket
from .fields import AmbientField, ScalarFieldE, TangentField, random_field
from .geometry import (
    DEFAULT_H,
    Chart,
    EllipsoidParams,
    GeometryError,
    ShellPoint,
    SurfacePoint,
    c313,
    chart_coords,
    check_pole,
    curvatures,
    e1_derivative,
    embed,
    frame_at,
    frame_field,
    lam,
    normal_field,
    tilt,
)
from .operators import OperatorKind, apply, bochner_structural
from .oracle import DEFAULT_H_CART, extrinsic_laplacian_tangential

JET_ORDER = 2


class FieldClass(str, enum.Enum):
    TANGENTIAL = "tangential"  # v tangent to every shell of the family
    DIVFREE = "divfree"  # normal component grows off E so that div v = 0 on E


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class FrameJet:
    """Second-order jet; ``coeffs[alpha]`` maps (phi, theta) to frame components (..., 3)."""

    direction: Chart
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "direction", Chart(self.direction))
        if len(self.coeffs) != JET_ORDER + 1:
            raise ValueError(f"a jet carries {JET_ORDER + 1} coefficients")

    def at(self, alpha: int, phi, theta) -> np.ndarray:
        return self.coeffs[alpha](np.asarray(phi, float), np.asarray(theta, float))

    def component(self, alpha: int, i: int) -> ScalarFieldE:
        """A_alpha^i as a scalar field (i = 1, 2, 3)."""
        return ScalarFieldE(lambda phi, theta: self.at(alpha, phi, theta)[..., i - 1], f"A{alpha}^{i}")

    def corrupted(self, alpha: int, i: int, factor: float = 1.1) -> "FrameJet":
        """Copy with A_alpha^i multiplied by ``factor``."""
        scale = np.ones(3)
        scale[i - 1] = factor
        coeffs = list(self.coeffs)
        old = coeffs[alpha]
        coeffs[alpha] = lambda phi, theta: old(phi, theta) * scale
        return replace(self, coeffs=tuple(coeffs))


@dataclass(frozen=True)
class Scenario:
    bc: BCKind
    direction: Chart
    fieldclass: FieldClass = FieldClass.TANGENTIAL

    def __post_init__(self):
        object.__setattr__(self, "direction", Chart(self.direction))
        object.__setattr__(self, "fieldclass", FieldClass(self.fieldclass))
        if self.direction is Chart.NORMAL and self.fieldclass is not FieldClass.TANGENTIAL:
            raise ValueError("normal-direction scenarios use tangential extensions only")
        if self.bc.friction != 0:
            raise ValueError("the replay covers the homogeneous conditions (friction 0)")

    @property
    def name(self) -> str:
        if self.direction is Chart.NORMAL:
            return f"normal-{self.bc.tag.value}"
        return f"scaling-{self.bc.tag.value}-{self.fieldclass.value}"

    @property
    def target(self) -> OperatorKind:
        if self.direction is Chart.NORMAL:
            return OperatorKind.DEFLAP if self.bc.tag is BCTag.NAVIER else OperatorKind.HODGE
        navier = self.bc.tag is BCTag.NAVIER
        if self.fieldclass is FieldClass.TANGENTIAL:
            return OperatorKind.O1 if navier else OperatorKind.O2
        return OperatorKind.O3 if navier else OperatorKind.O4

    @property
    def needs_divfree(self) -> bool:
        # Navier targets carry d d* u0, which the extrinsic Laplacian does not
        # produce; they only match for div_E u0 = 0.
        return self.fieldclass is FieldClass.DIVFREE or self.bc.tag is BCTag.NAVIER


SCENARIOS = {
    s.name: s
    for s in (
        Scenario(BCKind(BCTag.NAVIER), Chart.SCALING, FieldClass.TANGENTIAL),
        Scenario(BCKind(BCTag.HODGE), Chart.SCALING, FieldClass.TANGENTIAL),
        Scenario(BCKind(BCTag.NAVIER), Chart.SCALING, FieldClass.DIVFREE),
        Scenario(BCKind(BCTag.HODGE), Chart.SCALING, FieldClass.DIVFREE),
        Scenario(BCKind(BCTag.NAVIER), Chart.NORMAL),
        Scenario(BCKind(BCTag.HODGE), Chart.NORMAL),
    )
}


def scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; expected one of {', '.join(SCENARIOS)}") from None


# ---------------------------------------------------------------------------
# jets


def _tangent3(u: TangentField) -> Callable:
    def fn(phi, theta):
        uv = u(phi, theta)
        return np.concatenate([uv, np.zeros(uv.shape[:-1] + (1,))], axis=-1)

    return fn


def _zero3(phi, theta):
    return np.zeros(np.broadcast(phi, theta).shape + (3,))


def jet_from(direction: Chart, a0, a1=None, a2=None) -> FrameJet:
    """Jet from closures returning (..., 3); a TangentField for A0 is padded with A0^3 = 0."""
    if isinstance(a0, TangentField):
        a0 = _tangent3(a0)
    return FrameJet(direction, (a0, a1 or _zero3, a2 or _zero3))


def build_field(params: EllipsoidParams, jet: FrameJet) -> AmbientField:
    chart = jet.direction

    def fn(x):
        r, phi, theta = chart_coords(params, x, chart)
        if chart is Chart.SCALING:
            r = r - 1.0
        comps = 0.0
        for alpha in range(JET_ORDER, -1, -1):  # Horner in r
            comps = comps * r[..., None] + jet.at(alpha, phi, theta)
        return frame_field(params, x, chart).vector(comps)

    return AmbientField(fn, chart, "jet")


def solve_bc_coeffs(params: EllipsoidParams, sc: Scenario, u0: TangentField, h: float = DEFAULT_H, order: int = 4) -> FrameJet:
    """Solve the order-0 and order-1 boundary relations for A1 and A2 (pointwise, diagonal in the frame).

    Scaling chart, with k_j the principal curvatures of E, G = a g^{rho phi}
    the chart tilt and the sign s = -1 (Navier) or +1 (Hodge):

        (lambda/a) A1^j = s k_j A0^j - G E1(A0^j)
        A2^j = -(a / (2 lambda)) ((lambda/a - s k_j) A1^j + G E1(A1^j))

    Normal chart:  Navier A1 = -k A0, A2 = 0;  Hodge A1 = k A0, A2 = k^2 A0.
    A divergence-free extension sets A1^3 = (a/lambda) c^3_13 A0^1.
    """
    a = params.a
    sign = -1.0 if sc.bc.tag is BCTag.NAVIER else 1.0

    def kappa(phi):
        cd = curvatures(params, phi)
        return np.stack([cd.kappa1, cd.kappa2], axis=-1)

    if sc.direction is Chart.NORMAL:

        def a1(phi, theta):
            return np.concatenate([sign * kappa(phi) * u0(phi, theta), _zero3(phi, theta)[..., :1]], axis=-1)

        if sc.bc.tag is BCTag.NAVIER:
            a2 = _zero3
        else:

            def a2(phi, theta):
                return np.concatenate([kappa(phi) ** 2 * u0(phi, theta), _zero3(phi, theta)[..., :1]], axis=-1)

        return jet_from(Chart.NORMAL, u0, a1, a2)

    def ratio(phi):
        return (lam(params, phi) / a)[..., None]

    def a1_tan(phi, theta):
        e1u = e1_derivative(params, u0, phi, theta, h, order)
        return (sign * kappa(phi) * u0(phi, theta) - tilt(params, phi)[..., None] * e1u) / ratio(phi)

    def a1(phi, theta):
        if sc.fieldclass is FieldClass.DIVFREE:
            third = c313(params, phi) * u0(phi, theta)[..., 0] / ratio(phi)[..., 0]
        else:
            third = np.zeros(np.broadcast(phi, theta).shape)
        return np.concatenate([a1_tan(phi, theta), third[..., None]], axis=-1)

    def a2(phi, theta):
        t = a1_tan(phi, theta)
        e1t = e1_derivative(params, a1_tan, phi, theta, h, order)
        tan = -((ratio(phi) - sign * kappa(phi)) * t + tilt(params, phi)[..., None] * e1t) / (2.0 * ratio(phi))
        return np.concatenate([tan, np.zeros(tan.shape[:-1] + (1,))], axis=-1)

    return jet_from(Chart.SCALING, u0, a1, a2)


def random_jet(params: EllipsoidParams, seed: int, direction: Chart = Chart.SCALING) -> FrameJet:
    """Jet with A0 tangential and A1, A2 drawn from seeded presets (normal parts included)."""
    fields = [random_field(params, seed * 7 + k) for k in range(5)]

    def with_normal(t, n):
        def fn(phi, theta):
            return np.concatenate([t(phi, theta), n(phi, theta)[..., :1]], axis=-1)

        return fn

    return jet_from(direction, fields[0], with_normal(fields[1], fields[2]), with_normal(fields[3], fields[4]))


def surface_part(params: EllipsoidParams, v: AmbientField, chart: Chart = Chart.SCALING) -> TangentField:
    """Tangential frame components of an ambient field restricted to E."""

    def fn(phi, theta):
        p = SurfacePoint(phi, theta)
        return frame_at(params, p).components(v(embed(params, p)))[..., :2]

    return TangentField(fn, f"{v.name}|E")


# ---------------------------------------------------------------------------
# Gauss formula for the tangential Laplacian


def gauss_formula_rhs(params: EllipsoidParams, v: AmbientField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 4) -> np.ndarray:
    """nabla* nabla u - K u + (k1 + k2)[N, v]_tan - (D_N D_N v)_tan + nabla_{D_N N} u, u = v on E.

    Every term is assembled separately: intrinsic terms by frame differences
    on E, ambient terms by Cartesian differences of ``v`` and the unit normal.
    """
    check_pole(params, p.phi)
    chart = v.chart
    u = surface_part(params, v, chart)
    x = embed(params, p)
    fr = frame_at(params, p)
    nf = normal_field(params, chart)
    cd = curvatures(params, p)
    uv = u(p.phi, p.theta)

    rough = bochner_structural(params, u, p, h, order)
    ricci = cd.gauss[..., None] * uv
    bracket = fr.components(lie_bracket(nf, v, x, h, order))[..., :2]

    def dn_v(y):
        return fd.directional(v, y, nf(y), h, order)

    nn = fr.components(fd.directional(dn_v, x, nf(x), h, order))[..., :2]
    # D_N N = c^3_13 E1 on E, so its covariant derivative term is c E1-derivative of u
    accel = fd.directional(nf, x, nf(x), h, order)
    accel_t = fr.components(accel)[..., :2]
    drift = accel_t[..., :1] * covariant_along(params, u, 0, h, order)(p.phi, p.theta)
    drift = drift + accel_t[..., 1:] * covariant_along(params, u, 1, h, order)(p.phi, p.theta)
    return rough - ricci + (cd.kappa1 + cd.kappa2)[..., None] * bracket - nn + drift


def gauss_formula_check(params: EllipsoidParams, v: AmbientField, p: SurfacePoint, h: float = DEFAULT_H, h_cart: float = DEFAULT_H_CART, order: int = 4) -> np.ndarray:
    """Per-point max-abs gap between the Cartesian oracle and the assembled right-hand side."""
    lhs = extrinsic_laplacian_tangential(params, v, p, h_cart, order)
    rhs = gauss_formula_rhs(params, v, p, h, order)
    return np.max(np.abs(lhs - rhs), axis=-1)


# ---------------------------------------------------------------------------
# replay


@dataclass
class ReplayResult:
    scenario: Scenario
    oracle: np.ndarray
    intrinsic: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        return np.max(np.abs(self.oracle - self.intrinsic), axis=-1)


def check_divfree(params: EllipsoidParams, u0: TangentField, p: SurfacePoint, tol: float = 1e-6, h: float = DEFAULT_H) -> float:
    worst = float(np.max(np.abs(divergence_field(params, u0, h, 4)(p.phi, p.theta)), initial=0.0))
    if worst >= tol:
        raise PreconditionError(f"div_E u0 = {worst:.3e} at the sample points (needs < {tol:g}) for field {u0.name!r}")
    return worst


def replay(
    params: EllipsoidParams,
    sc: Scenario,
    u0: TangentField,
    p: SurfacePoint,
    h: float = DEFAULT_H,
    h_cart: float = DEFAULT_H_CART,
    oracle_order: int = 4,
    jet: FrameJet | None = None,
    check: bool = True,
) -> ReplayResult:
    """Oracle Laplacian of the solved jet against the scenario's intrinsic operator on u0.

    ``jet`` overrides the solved jet (used for the corruption control).
    """
    check_pole(params, p.phi)
    if check and sc.needs_divfree:
        check_divfree(params, u0, p)
    jet = jet or solve_bc_coeffs(params, sc, u0, h)
    v = build_field(params, jet)
    oracle = extrinsic_laplacian_tangential(params, v, p, h_cart, oracle_order)
    intrinsic = apply(params, sc.target, u0, p, h).value
    return ReplayResult(sc, oracle, intrinsic)


def replay_convergence(
    params: EllipsoidParams,
    sc: Scenario,
    u0: TangentField,
    p: SurfacePoint,
    steps: Sequence[float] = (1e-2, 5e-3, 2.5e-3),
    h: float = DEFAULT_H,
) -> tuple[float, list[float]]:
    """Log-log slope of the max replay residual against the oracle step."""
    jet = solve_bc_coeffs(params, sc, u0, h)
    v = build_field(params, jet)
    intrinsic = apply(params, sc.target, u0, p, h).value
    errs = [float(np.max(np.abs(extrinsic_laplacian_tangential(params, v, p, hc, 2) - intrinsic))) for hc in steps]
    slope, _ = fd.loglog_slope(steps, errs)
    return slope, errs


# ---------------------------------------------------------------------------
# outer-boundary audit


def outer_residual(params: EllipsoidParams, bc: BCKind, v: AmbientField, q: ShellPoint, h: float = DEFAULT_H, order: int = 4) -> np.ndarray:
    """Tangential boundary relation on the shell through ``q``.

    Navier: [N, v]_tan.  Hodge: [N, v]_tan - 2 s v_tan with the closed-form
    shape operator of the shell.  For a field tangent to the shell the Hodge
    form equals curl v x N; when v has a normal part the two differ by the
    tangential gradient of g(N, v), which the expansion treats as part of the
    penetration condition instead.
    """
    x = embed(params, q)
    fr = frame_at(params, q)
    br = fr.components(lie_bracket(normal_field(params, q.chart), v, x, h, order))[..., :2]
    if bc.tag is BCTag.NAVIER:
        return br
    vt = fr.components(v(x))[..., :2]
    return br - 2.0 * np.einsum("...ij,...j->...i", shape_matrix(params, q), vt)


@dataclass
class AuditResult:
    eps: list
    residuals: list
    inner: float
    slope: float


def eps_relation_audit(
    params: EllipsoidParams,
    sc: Scenario,
    jet: FrameJet,
    p: SurfacePoint,
    eps_list: Sequence[float] = (1e-2, 5e-3, 2.5e-3),
    h: float = DEFAULT_H,
) -> AuditResult:
    """Outer-boundary residual of the built field on the shells rho = 1 + eps, with its log-log slope."""
    if sc.direction is not Chart.SCALING:
        raise ValueError("the eps audit runs on the scaling family")
    if max(eps_list) >= 0.5:
        raise GeometryError("eps exceeds the scaling band")
    v = build_field(params, jet)
    res = []
    for eps in eps_list:
        q = ShellPoint.scaling(np.full(np.shape(p.phi), 1.0 + eps), p.phi, p.theta)
        res.append(float(np.max(np.abs(outer_residual(params, sc.bc, v, q, h)))))
    inner_q = ShellPoint.scaling(np.ones(np.shape(p.phi)), p.phi, p.theta)
    inner = float(np.max(np.abs(outer_residual(params, sc.bc, v, inner_q, h))))
    slope, _ = fd.loglog_slope(eps_list, res)
    return AuditResult(list(eps_list), res, inner, slope)
