"""Vector-field calculus on E and in the surrounding band.

Surface operations act on :class:`TangentField` closures and differentiate
with centered differences in (phi, theta).  Ambient operations act on
:class:`AmbientField` closures and differentiate in Cartesian coordinates, so
they do not depend on any chart.
"""

from __future__ import annotations

import enum

import numpy as np

from . import fd
from .fields import AmbientField, ScalarFieldE, TangentField
from .geometry import (
    DEFAULT_H,
    Chart,
    EllipsoidParams,
    ShellPoint,
    SurfacePoint,
    check_pole,
    connection_table,
    e1_derivative,
    e2_derivative,
    embed,
    frame_at,
    g_rho_phi_upper,
    lam,
    metric_scaling,
    theta_step,
)


class Direction(str, enum.Enum):
    E1 = "E1"
    E2 = "E2"
    N = "N"


def _as_shell(q) -> ShellPoint:
    return q.shell() if isinstance(q, SurfacePoint) else q


def _expand(arr, ndim):
    arr = np.asarray(arr)
    return arr.reshape(arr.shape + (1,) * (ndim - arr.ndim))


# ---------------------------------------------------------------------------
# frame components


def frame_components(params: EllipsoidParams, v: AmbientField, q) -> np.ndarray:
    """(v1, v2, v3) of ``v`` in the frame at ``q``."""
    q = _as_shell(q)
    return frame_at(params, q).components(v(embed(params, q)))


def coordinate_components(params: EllipsoidParams, v: AmbientField, q: ShellPoint) -> np.ndarray:
    """Scaling-chart components (v^rho, v^phi, v^theta) from the coordinate vectors and g^-1."""
    q = _as_shell(q)
    a = params.a
    r, s, c = q.radial, np.sin(q.phi), np.cos(q.phi)
    ct, st = np.cos(q.theta), np.sin(q.theta)
    basis = np.stack(
        [
            np.stack([a * s * ct, a * s * st, c], axis=-1),
            np.stack([a * r * c * ct, a * r * c * st, -r * s], axis=-1),
            np.stack([-a * r * s * st, a * r * s * ct, np.zeros_like(s)], axis=-1),
        ],
        axis=-2,
    )
    lower = np.einsum("...ij,...j->...i", basis, v(embed(params, q)))
    _, ginv = metric_scaling(params, q)
    return np.einsum("...ij,...j->...i", ginv, lower)


def frame_from_coordinates(params: EllipsoidParams, comps, q: ShellPoint) -> np.ndarray:
    """Frame components from scaling-chart components.

    v1 = v_phi / (rho lambda), v2 = a rho sin(phi) v^theta, v3 = a v^rho / lambda.
    """
    q = _as_shell(q)
    comps = np.asarray(comps, float)
    g, _ = metric_scaling(params, q)
    v_phi = g[..., 1, 0] * comps[..., 0] + g[..., 1, 1] * comps[..., 1]
    L = lam(params, q.phi)
    return np.stack(
        [
            v_phi / (q.radial * L),
            params.a * q.radial * np.sin(q.phi) * comps[..., 2],
            params.a * comps[..., 0] / L,
        ],
        axis=-1,
    )


# ---------------------------------------------------------------------------
# directional derivatives of scalar fields on the band


def dir_deriv(
    params: EllipsoidParams,
    f,
    which: Direction,
    q,
    h: float = DEFAULT_H,
    order: int = 2,
    route: str = "chart",
):
    """Derivative of a Cartesian scalar field ``f`` along E1, E2 or N at a scaling-chart point.

    ``route="chart"`` differentiates along coordinate curves; for N it uses
    N(f) = (lambda/a) d_rho f + a rho g^{rho phi} E1(f).  ``route="cartesian"``
    differentiates along the frame vector in Cartesian space.
    """
    which = Direction(which)
    q = _as_shell(q)
    check_pole(params, q.phi)
    if route == "cartesian":
        fr = frame_at(params, q)
        d = {Direction.E1: fr.e1, Direction.E2: fr.e2, Direction.N: fr.n}[which]
        return fd.directional(f, embed(params, q), d, h, order)
    if route != "chart":
        raise ValueError(f"unknown route {route!r}")
    if q.chart is not Chart.SCALING:
        raise ValueError("the chart route is only available in the scaling chart")
    a = params.a
    r, phi, theta = q.radial, q.phi, q.theta
    L = lam(params, phi)

    def at(rr, pp, tt):
        return f(embed(params, ShellPoint.scaling(rr, pp, tt)))

    e1 = fd.derivative(lambda t: at(r, t, theta), phi, h, order) / (r * L)
    if which is Direction.E1:
        return e1
    if which is Direction.E2:
        return fd.derivative(lambda t: at(r, phi, t), theta, theta_step(params, phi, h, r), order) / (a * r * np.sin(phi))
    d_rho = fd.derivative(lambda t: at(t, phi, theta), r, h, order)
    return (L / a) * d_rho + a * r * g_rho_phi_upper(params, r, phi) * e1


# ---------------------------------------------------------------------------
# intrinsic calculus on E


def _field_values(params, x, p):
    if isinstance(x, TangentField):
        return x(p.phi, p.theta)
    return np.broadcast_to(np.asarray(x, float), p.phi.shape + (2,))


def covariant_along(params: EllipsoidParams, y: TangentField, i: int, h: float = DEFAULT_H, order: int = 2) -> TangentField:
    """The tangent field nabla_{E_i} Y (i = 0 for E1, 1 for E2) as a closure."""
    deriv = (e1_derivative, e2_derivative)[i]

    def fn(phi, theta):
        dy = deriv(params, y, phi, theta, h, order)
        gam = connection_table(params, phi)[..., :, i, :]
        return dy + np.einsum("...kj,...j->...k", gam, y(phi, theta))

    return TangentField(fn, f"nabla_{i + 1}({y.name})")


def covar_surface(params: EllipsoidParams, x, y: TangentField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Levi-Civita derivative nabla_X Y on E from frame derivatives and the connection table.

    ``x`` is a TangentField or an array of frame components at ``p``.
    """
    check_pole(params, p.phi)
    xv = _field_values(params, x, p)
    out = 0.0
    for i in range(2):
        out = out + xv[..., i, None] * covariant_along(params, y, i, h, order)(p.phi, p.theta)
    return out


def covar_surface_projected(params: EllipsoidParams, x, y: TangentField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Tangential part of the Euclidean derivative of Y extended along rays: the other route to nabla_X Y.

    Returns all three frame components; the third one is h(X, Y).
    """
    from .fields import extend_along_rays

    check_pole(params, p.phi)
    fr = frame_at(params, p)
    d = fr.vector(_field_values(params, x, p))
    dv = fd.directional(extend_along_rays(params, y), embed(params, p), d, h, order)
    return fr.components(dv)


def covar_euclidean(v: AmbientField, x, point, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Flat derivative D_x v at Cartesian ``point`` along Cartesian ``x``."""
    return fd.directional(v, point, x, h, order)


def lie_bracket(v: AmbientField, w: AmbientField, point, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """[v, w] = D_v w - D_w v at Cartesian points."""
    point = np.asarray(point, float)
    return fd.directional(w, point, v(point), h, order) - fd.directional(v, point, w(point), h, order)


def surface_bracket(params: EllipsoidParams, x: TangentField, y: TangentField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """[X, Y] on E via the Cartesian bracket of the ray-constant extensions (frame components)."""
    from .fields import extend_along_rays

    check_pole(params, p.phi)
    xe, ye = extend_along_rays(params, x), extend_along_rays(params, y)
    br = lie_bracket(xe, ye, embed(params, p), h, order)
    return frame_at(params, p).components(br)[..., :2]


def vorticity(params: EllipsoidParams, u: TangentField, h: float = DEFAULT_H, order: int = 2) -> ScalarFieldE:
    """zeta = *d(u_flat) = (d_phi(a sin(phi) u2) - d_theta(lambda u1)) / (lambda a sin(phi))."""
    a = params.a

    def fn(phi, theta):
        def w_theta(t):
            return a * np.sin(t) * u(t, theta)[..., 1]

        def w_phi(t):
            return lam(params, phi) * u(phi, t)[..., 0]

        num = fd.derivative(w_theta, phi, h, order) - fd.derivative(w_phi, theta, theta_step(params, phi, h), order)
        return num / (lam(params, phi) * a * np.sin(phi))

    return ScalarFieldE(fn, f"vort({u.name})")


def divergence_field(params: EllipsoidParams, u: TangentField, h: float = DEFAULT_H, order: int = 2) -> ScalarFieldE:
    """div_E u = (d_phi(a sin(phi) u1) + d_theta(lambda u2)) / (lambda a sin(phi))."""
    a = params.a

    def fn(phi, theta):
        def f_phi(t):
            return a * np.sin(t) * u(t, theta)[..., 0]

        def f_theta(t):
            return lam(params, phi) * u(phi, t)[..., 1]

        num = fd.derivative(f_phi, phi, h, order) + fd.derivative(f_theta, theta, theta_step(params, phi, h), order)
        return num / (lam(params, phi) * a * np.sin(phi))

    return ScalarFieldE(fn, f"div({u.name})")


def divergence_frame_sum(params: EllipsoidParams, u: TangentField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2):
    """sum_i g(nabla_{E_i} u, E_i)."""
    total = 0.0
    for i in range(2):
        total = total + covariant_along(params, u, i, h, order)(p.phi, p.theta)[..., i]
    return total


def divergence(params: EllipsoidParams, v, where: str, q, h: float = DEFAULT_H, order: int = 2):
    """Divergence on E (``where="E"``, TangentField) or in R^3 (``where="R3"``, AmbientField).

    For R^3, ``q`` may be a chart point or an array of Cartesian points.
    """
    if where == "E":
        p = q.surface if isinstance(q, ShellPoint) else q
        check_pole(params, p.phi)
        return divergence_field(params, v, h, order)(p.phi, p.theta)
    if where == "R3":
        x = embed(params, q) if isinstance(q, (ShellPoint, SurfacePoint)) else np.asarray(q, float)
        return np.trace(fd.jacobian(v, x, h, order), axis1=-2, axis2=-1)
    raise ValueError(f"where must be 'E' or 'R3', got {where!r}")


def deformation_surface(params: EllipsoidParams, u: TangentField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """(Def u)_ij = (g(nabla_i u, E_j) + g(nabla_j u, E_i)) / 2, shape (..., 2, 2)."""
    check_pole(params, p.phi)
    grad = np.stack([covariant_along(params, u, i, h, order)(p.phi, p.theta) for i in range(2)], axis=-2)
    return 0.5 * (grad + np.swapaxes(grad, -1, -2))


def deformation_ambient(v: AmbientField, point, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Cartesian (D v + (D v)^T) / 2."""
    j = fd.jacobian(v, point, h, order)
    return 0.5 * (j + np.swapaxes(j, -1, -2))


def deformation(params: EllipsoidParams, v, p, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Deformation tensor: 2x2 frame components for a TangentField, 3x3 Cartesian for an AmbientField."""
    if isinstance(v, TangentField):
        return deformation_surface(params, v, p, h, order)
    x = embed(params, p) if isinstance(p, (ShellPoint, SurfacePoint)) else np.asarray(p, float)
    return deformation_ambient(v, x, h, order)


def lie_deriv_oneform(params: EllipsoidParams, x: TangentField, u: TangentField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """(L_X u_flat)_i = g(nabla_X u, E_i) + g(u, nabla_{E_i} X)."""
    check_pole(params, p.phi)
    first = covar_surface(params, x, u, p, h, order)
    uv = u(p.phi, p.theta)
    second = np.stack(
        [np.sum(uv * covariant_along(params, x, i, h, order)(p.phi, p.theta), axis=-1) for i in range(2)],
        axis=-1,
    )
    return first + second


def lie_deriv_oneform_cartan(params: EllipsoidParams, x: TangentField, u: TangentField, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Cartan's formula iota_X d(u_flat) + d(iota_X u_flat) with all derivatives by differences."""
    check_pole(params, p.phi)
    zeta = vorticity(params, u, h, order)(p.phi, p.theta)
    xv = x(p.phi, p.theta)
    contraction = np.stack([-zeta * xv[..., 1], zeta * xv[..., 0]], axis=-1)

    def pairing(phi, theta):
        return np.sum(x(phi, theta) * u(phi, theta), axis=-1)

    exact = np.stack(
        [
            e1_derivative(params, pairing, p.phi, p.theta, h, order),
            e2_derivative(params, pairing, p.phi, p.theta, h, order),
        ],
        axis=-1,
    )
    return contraction + exact


# ---------------------------------------------------------------------------
# curl and the algebraic identities of forms on R^3

_LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _LEVI_CIVITA[_i, _j, _k] = 1.0
    _LEVI_CIVITA[_i, _k, _j] = -1.0


def wedge(alpha, beta) -> np.ndarray:
    """(alpha ^ beta)_jk = alpha_j beta_k - alpha_k beta_j."""
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    outer = alpha[..., :, None] * beta[..., None, :]
    return outer - np.swapaxes(outer, -1, -2)


def star2(omega) -> np.ndarray:
    """Hodge star of a 2-form on R^3: (*omega)_i = eps_ijk omega_jk / 2."""
    return 0.5 * np.einsum("ijk,...jk->...i", _LEVI_CIVITA, np.asarray(omega, float))


def exterior_derivative(v: AmbientField, point, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """(d v_flat)_jk = d_j v_k - d_k v_j."""
    j = fd.jacobian(v, point, h, order)
    return np.swapaxes(j, -1, -2) - j


def curl(v: AmbientField, point, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    j = fd.jacobian(v, point, h, order)
    return np.stack(
        [j[..., 2, 1] - j[..., 1, 2], j[..., 0, 2] - j[..., 2, 0], j[..., 1, 0] - j[..., 0, 1]],
        axis=-1,
    )


def curl_and_musical(v: AmbientField, point, alpha=None, beta=None, h: float = DEFAULT_H, order: int = 2):
    """Curl of ``v`` plus the residuals of alpha# x beta# = *(alpha ^ beta) and curl v = *d v_flat.

    ``alpha`` and ``beta`` default to the pair (v, curl v) at ``point``.
    """
    point = np.asarray(point, float)
    c = curl(v, point, h, order)
    if alpha is None:
        alpha = v(point)
    if beta is None:
        beta = c
    cross = np.max(np.abs(np.cross(alpha, beta) - star2(wedge(alpha, beta))), axis=-1)
    d_form = np.max(np.abs(c - star2(exterior_derivative(v, point, h, order))), axis=-1)
    return c, {"cross_wedge": cross, "curl_d": d_form}
