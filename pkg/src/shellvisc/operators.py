"""The seven viscosity operators on tangent fields of E.

Each operator is assembled along two routes:

* ``STRUCTURAL`` composes the defining formula from generic calculus
  (nested covariant derivatives, the divergence of the deformation tensor,
  exterior derivatives, brackets and Lie derivatives), every derivative a
  centered difference;
* ``COEFFICIENT`` expands the operator in frame components with explicit
  curvature coefficients, using a single level of first and second
  differences of the components.

Agreement of the routes is what certifies the closed-form coefficients.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import fd
from .fieldcalc import (
    covariant_along,
    divergence_field,
    lie_deriv_oneform_cartan,
    surface_bracket,
    vorticity,
)
from .fields import TangentField
from .geometry import (
    DEFAULT_H,
    EllipsoidParams,
    SurfacePoint,
    c313,
    check_pole,
    connection_table,
    curvatures,
    dlam_dphi,
    e1_derivative,
    e2_derivative,
    lam,
    theta_step,
)


# Operators nest two levels of differences; the fourth-order stencil keeps the
# truncation part of the error well below the roundoff floor at h = 1e-4.
OPERATOR_ORDER = 4


class OperatorKind(str, enum.Enum):
    BOCHNER = "bochner"
    HODGE = "hodge"
    DEFLAP = "deflap"
    O1 = "o1"  # Navier, tangential extension
    O2 = "o2"  # Hodge, tangential extension
    O3 = "o3"  # Navier, divergence-free extension
    O4 = "o4"  # Hodge, divergence-free extension


CANDIDATES = (OperatorKind.O1, OperatorKind.O2, OperatorKind.O3, OperatorKind.O4)


class Route(str, enum.Enum):
    STRUCTURAL = "structural"
    COEFFICIENT = "coefficient"
    ORACLE = "oracle"


@dataclass
class OperatorResult:
    kind: OperatorKind
    values: dict = field(default_factory=dict)

    @property
    def value(self) -> np.ndarray:
        return self.values[Route.STRUCTURAL]

    def gap(self, r1: Route = Route.STRUCTURAL, r2: Route = Route.COEFFICIENT) -> np.ndarray:
        """Max-abs frame-component discrepancy between two routes, per point."""
        return np.max(np.abs(self.values[r1] - self.values[r2]), axis=-1)


def _cot_over_lam(params, phi):
    return 1.0 / (np.tan(phi) * lam(params, phi))


# ---------------------------------------------------------------------------
# building blocks


def c313_e1_field(params: EllipsoidParams) -> TangentField:
    """The tangent field c^3_13 E1."""
    return TangentField(
        lambda phi, theta: np.stack(np.broadcast_arrays(c313(params, phi) + 0.0 * theta, 0.0 * phi * theta), axis=-1),
        "c313*E1",
    )


def ricci_op(params: EllipsoidParams, u: TangentField, p: SurfacePoint) -> np.ndarray:
    """Ric u = K_E u on a surface."""
    check_pole(params, p.phi)
    return curvatures(params, p).gauss[..., None] * u(p.phi, p.theta)


def bochner_structural(params, u, p, h=DEFAULT_H, order=OPERATOR_ORDER):
    """-sum_i (nabla_i nabla_i u - nabla_{nabla_i E_i} u) with nested covariant derivatives."""
    phi, theta = p.phi, p.theta
    gam = connection_table(params, phi)
    first = [covariant_along(params, u, i, h, order) for i in range(2)]
    out = 0.0
    for i in range(2):
        out = out - covariant_along(params, first[i], i, h, order)(phi, theta)
        for k in range(2):
            out = out + gam[..., k, i, i, None] * first[k](phi, theta)
    return out


def _partials(params, u, phi, theta, h, order):
    """First and second coordinate partials of the components, each (..., 2)."""
    ht = np.broadcast_to(theta_step(params, phi, h), np.broadcast(phi, theta).shape)
    up = fd.derivative(lambda t: u(t, theta), phi, h, order)
    ut = fd.derivative(lambda t: u(phi, t), theta, ht, order)
    upp = fd.second_derivative(lambda t: u(t, theta), phi, h, order)
    utt = fd.second_derivative(lambda t: u(phi, t), theta, ht, order)
    return up, ut, upp, utt


def bochner_coefficient(params, u, p, h=DEFAULT_H, order=OPERATOR_ORDER):
    """Component expansion of the rough Laplacian in the frame.

    (B u)^1 = -E1E1 u1 - E2E2 u1 - k E1 u1 + 2k E2 u2 + k^2 u1
    (B u)^2 = -E1E1 u2 - E2E2 u2 - k E1 u2 - 2k E2 u1 + k^2 u2
    with k = cot(phi)/lambda.
    """
    phi, theta = p.phi, p.theta
    a = params.a
    L = lam(params, phi)[..., None]
    dL = dlam_dphi(params, phi)[..., None]
    s = np.sin(phi)[..., None]
    k = _cot_over_lam(params, phi)[..., None]
    uv = u(phi, theta)
    up, ut, upp, utt = _partials(params, u, phi, theta, h, order)
    e1 = up / L
    e2 = ut / (a * s)
    e1e1 = upp / L**2 - dL * up / L**3
    e2e2 = utt / (a * s) ** 2
    rot = np.stack([e2[..., 1], -e2[..., 0]], axis=-1)
    return -e1e1 - e2e2 - k * e1 + 2.0 * k * rot + k**2 * uv


def codiff_gradient(params, u, p, h=DEFAULT_H, order=OPERATOR_ORDER):
    """d d* u_flat = -grad(div u) in frame components."""
    div = divergence_field(params, u, h, order)
    return -np.stack(
        [e1_derivative(params, div, p.phi, p.theta, h, order), e2_derivative(params, div, p.phi, p.theta, h, order)],
        axis=-1,
    )


def curl_curl(params, u, p, h=DEFAULT_H, order=OPERATOR_ORDER):
    """d* d u_flat = (E2 zeta, -E1 zeta) with zeta = *d u_flat."""
    zeta = vorticity(params, u, h, order)
    return np.stack(
        [e2_derivative(params, zeta, p.phi, p.theta, h, order), -e1_derivative(params, zeta, p.phi, p.theta, h, order)],
        axis=-1,
    )


def deformation_field(params, u, h=DEFAULT_H, order=OPERATOR_ORDER):
    """Def u as a closure (phi, theta) -> (..., 2, 2)."""
    cov = [covariant_along(params, u, i, h, order) for i in range(2)]

    def fn(phi, theta):
        grad = np.stack([c(phi, theta) for c in cov], axis=-2)
        return 0.5 * (grad + np.swapaxes(grad, -1, -2))

    return fn


def div_deformation(params, u, p, h=DEFAULT_H, order=OPERATOR_ORDER):
    """(div Def u)_j = sum_i (nabla_{E_i} Def)(E_i, E_j) by differences of the tensor closure."""
    phi, theta = p.phi, p.theta
    dfn = deformation_field(params, u, h, order)
    gam = connection_table(params, phi)
    d_here = dfn(phi, theta)
    dd = [e1_derivative(params, dfn, phi, theta, h, order), e2_derivative(params, dfn, phi, theta, h, order)]
    out = np.zeros(np.shape(phi) + (2,))
    for j in range(2):
        for i in range(2):
            out[..., j] += dd[i][..., i, j]
            for k in range(2):
                out[..., j] -= gam[..., k, i, i] * d_here[..., k, j]
                out[..., j] -= gam[..., k, i, j] * d_here[..., i, k]
    return out


def zero_order_coefficients(params: EllipsoidParams, phi, bc: str, form: str = "curvature") -> np.ndarray:
    """Zeroth-order coefficients (E1, E2) of the divergence-free summary operators.

    ``form="curvature"`` writes them with K_E, sqrt(K_E), kappa_1 and |grad rho|;
    ``form="lambda"`` with powers of lambda.  The two must agree.
    """
    if form == "lambda":
        a2 = params.a**2
        L2 = lam(params, phi) ** 2
        if bc == "navier":
            return np.stack([1 / L2**2 - 3 * a2 / L2**3 - 1 / L2 + 2 * a2 / L2**2, 1 / L2 - 2 / L2**2], axis=-1)
        if bc == "hodge":
            return np.stack([3 / L2 - (3 + 4 * a2) / L2**2 + 5 * a2 / L2**3, 2 / L2**2 - 1 / L2], axis=-1)
        raise ValueError(bc)
    cd = curvatures(params, phi)
    K, rK, k1, g = cd.gauss, cd.sqrt_gauss, cd.kappa1, cd.grad_rho_norm
    if bc == "navier":
        return np.stack([K - rK - 3 * k1**2 - 2 * k1 / g, rK - 2 * K], axis=-1)
    if bc == "hodge":
        return np.stack([3 * rK - 3 * K + 5 * k1**2 + 4 * k1 / g, 2 * K - rK], axis=-1)
    raise ValueError(bc)


def summary_operator(params, bc: str, u, p, h=DEFAULT_H, order=OPERATOR_ORDER):
    """grad-free summary form: B u + c E1-derivative of u + zero-order terms.

    For ``bc="navier"`` this is o3 minus d d* u, so it equals o3 on
    divergence-free fields; for ``bc="hodge"`` it is o4 exactly.
    """
    phi, theta = p.phi, p.theta
    c = c313(params, phi)[..., None]
    drift = c * e1_derivative(params, u, phi, theta, h, order)
    return bochner_coefficient(params, u, p, h, order) + drift + zero_order_coefficients(params, phi, bc) * u(phi, theta)


def _c2_u1_e1(params, u, p):
    uv = u(p.phi, p.theta)
    c = c313(params, p.phi)
    return np.stack([2.0 * c**2 * uv[..., 0], np.zeros_like(c)], axis=-1)


# ---------------------------------------------------------------------------
# public operators


def bochner(params: EllipsoidParams, u: TangentField, p: SurfacePoint, h=DEFAULT_H, order=OPERATOR_ORDER) -> OperatorResult:
    check_pole(params, p.phi)
    return OperatorResult(
        OperatorKind.BOCHNER,
        {Route.STRUCTURAL: bochner_structural(params, u, p, h, order), Route.COEFFICIENT: bochner_coefficient(params, u, p, h, order)},
    )


def hodge_laplacian(params: EllipsoidParams, u: TangentField, p: SurfacePoint, h=DEFAULT_H, order=OPERATOR_ORDER) -> OperatorResult:
    """(d*d + dd*) u_flat, against the Weitzenbock form B u + K_E u."""
    check_pole(params, p.phi)
    structural = curl_curl(params, u, p, h, order) + codiff_gradient(params, u, p, h, order)
    coefficient = bochner_coefficient(params, u, p, h, order) + ricci_op(params, u, p)
    return OperatorResult(OperatorKind.HODGE, {Route.STRUCTURAL: structural, Route.COEFFICIENT: coefficient})


def def_laplacian(params: EllipsoidParams, u: TangentField, p: SurfacePoint, h=DEFAULT_H, order=OPERATOR_ORDER) -> OperatorResult:
    """-2 div Def u, against B u - Ric u + d d* u."""
    check_pole(params, p.phi)
    structural = -2.0 * div_deformation(params, u, p, h, order)
    coefficient = bochner_coefficient(params, u, p, h, order) - ricci_op(params, u, p) + codiff_gradient(params, u, p, h, order)
    return OperatorResult(OperatorKind.DEFLAP, {Route.STRUCTURAL: structural, Route.COEFFICIENT: coefficient})


def candidate(params: EllipsoidParams, kind: OperatorKind, u: TangentField, p: SurfacePoint, h=DEFAULT_H, order=OPERATOR_ORDER) -> OperatorResult:
    """The thin-shell operators o1..o4.

    o3 = -2 div Def u + [c E1, u]          o1 = o3 + 2 c^2 u1 E1
    o2 = (d*d + dd*) u_flat + L_{c E1} u_flat    o4 = o2 - 2 c^2 u1 E1
    with c = c^3_13.
    """
    kind = OperatorKind(kind)
    if kind not in CANDIDATES:
        raise ValueError(f"{kind.value} is not one of o1..o4")
    check_pole(params, p.phi)
    x = c313_e1_field(params)
    extra = _c2_u1_e1(params, u, p)
    if kind in (OperatorKind.O1, OperatorKind.O3):
        structural = -2.0 * div_deformation(params, u, p, h, order) + surface_bracket(params, x, u, p, h, order)
        coefficient = summary_operator(params, "navier", u, p, h, order) + codiff_gradient(params, u, p, h, order)
        if kind is OperatorKind.O1:
            structural, coefficient = structural + extra, coefficient + extra
    else:
        hodge = curl_curl(params, u, p, h, order) + codiff_gradient(params, u, p, h, order)
        structural = hodge + lie_deriv_oneform_cartan(params, x, u, p, h, order)
        coefficient = summary_operator(params, "hodge", u, p, h, order)
        if kind is OperatorKind.O2:
            coefficient = coefficient + extra
        else:
            structural = structural - extra
    return OperatorResult(kind, {Route.STRUCTURAL: structural, Route.COEFFICIENT: coefficient})


def apply(params: EllipsoidParams, kind, u: TangentField, p: SurfacePoint, h=DEFAULT_H, order=OPERATOR_ORDER) -> OperatorResult:
    """Evaluate any operator by its tag."""
    kind = OperatorKind(kind)
    if kind is OperatorKind.BOCHNER:
        return bochner(params, u, p, h, order)
    if kind is OperatorKind.HODGE:
        return hodge_laplacian(params, u, p, h, order)
    if kind is OperatorKind.DEFLAP:
        return def_laplacian(params, u, p, h, order)
    return candidate(params, kind, u, p, h, order)


def key1_check(params: EllipsoidParams, w: TangentField, p: SurfacePoint, h=DEFAULT_H, order=OPERATOR_ORDER):
    """Residuals of the two identities for the derivative of X = c^3_13 E1.

    1. g(w, nabla_. X)^# = nabla_w X   (nabla X is symmetric: X = -grad(log K_E)/4)
    2. -nabla_w X = Ric w + (K - sqrt K - 3 kappa_1^2 - 2 kappa_1/|grad rho|) w1 E1 + (sqrt K - 2K) w2 E2

    Returns two arrays of per-point max-abs residuals.
    """
    check_pole(params, p.phi)
    x = c313_e1_field(params)
    m = np.stack([covariant_along(params, x, i, h, order)(p.phi, p.theta) for i in range(2)], axis=-2)
    wv = w(p.phi, p.theta)
    nabla_w = np.einsum("...i,...ik->...k", wv, m)
    transposed = np.einsum("...k,...ik->...i", wv, m)
    r1 = np.max(np.abs(transposed - nabla_w), axis=-1)
    coef = zero_order_coefficients(params, p.phi, "navier")
    rhs = curvatures(params, p).gauss[..., None] * wv + coef * wv
    r2 = np.max(np.abs(-nabla_w - rhs), axis=-1)
    return r1, r2


def nabla_c313_e1_closed(params: EllipsoidParams, w: TangentField, p: SurfacePoint) -> np.ndarray:
    """nabla_w(c E1) = w1 E1(c) E1 + w2 c cot(phi)/lambda E2, with E1(c) in lambda form."""
    wv = w(p.phi, p.theta)
    L = lam(params, p.phi)
    a2 = params.a**2
    e1c = -2 * (1 + a2) / L**4 + 1 / L**2 + 3 * a2 / L**6
    return np.stack([wv[..., 0] * e1c, wv[..., 1] * c313(params, p.phi) * _cot_over_lam(params, p.phi)], axis=-1)


def bochner_weak_form(params: EllipsoidParams, u: TangentField, w: TangentField, n_phi: int, n_theta: int, h=DEFAULT_H):
    """Midpoint-rule values of <B u, w>, <nabla u, nabla w> and <u, B w> over the polar-excluded band."""
    d = params.delta_pole
    dphi = (np.pi - 2 * d) / n_phi
    dth = 2 * np.pi / n_theta
    phi = d + dphi * (np.arange(n_phi) + 0.5)
    theta = -np.pi + dth * np.arange(n_theta)
    P, T = np.meshgrid(phi, theta, indexing="ij")
    p = SurfacePoint(P, T)
    area = lam(params, P) * params.a * np.sin(P) * dphi * dth
    bu = bochner_coefficient(params, u, p, h)
    bw = bochner_coefficient(params, w, p, h)
    grad = 0.0
    for i in range(2):
        grad = grad + np.sum(covariant_along(params, u, i, h)(P, T) * covariant_along(params, w, i, h)(P, T), axis=-1)
    lhs = float(np.sum(np.sum(bu * w(P, T), axis=-1) * area))
    mid = float(np.sum(grad * area))
    rhs = float(np.sum(np.sum(u(P, T) * bw, axis=-1) * area))
    return lhs, mid, rhs
