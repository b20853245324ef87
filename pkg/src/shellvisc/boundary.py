"""Navier and Hodge boundary conditions on E and on the shells around it.

A boundary shell is the surface of the chart family through a ShellPoint:
the rescaled ellipsoid rho = const (scaling chart) or the parallel surface
at distance sigma (normal chart).  Both share the frame of E along the ray,
so residuals are reported as tangential 2-vectors in that frame.

Each condition is evaluated along independent routes built on Cartesian
Jacobians of the field and of the unit normal field.  Route agreement is the
numerical form of the statement that the Navier condition is the tangential
Lie bracket [N, v] and the Hodge condition is the pulled-back Lie derivative
of v_flat along N.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import fd
from .fields import AmbientField
from .fieldcalc import curl, exterior_derivative, lie_bracket
from .geometry import (
    DEFAULT_H,
    Chart,
    EllipsoidParams,
    ShellPoint,
    SurfacePoint,
    check_chart,
    check_pole,
    embed,
    frame_at,
    normal_field,
    shape_operator,
    shell_curvatures,
)


class BCTag(str, enum.Enum):
    NAVIER = "navier"
    HODGE = "hodge"


@dataclass(frozen=True)
class BCKind:
    tag: BCTag = BCTag.NAVIER
    friction: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tag", BCTag(self.tag))
        if not np.isfinite(self.friction) or self.friction < 0:
            raise ValueError(f"friction must be a nonnegative real, got {self.friction}")


# route tags
NAVIER_ROUTES = ("2(Def v N)_tan + gamma v", "[N,v]_tan + gamma v", "curl v x N + 2 s v + gamma v")
HODGE_ROUTES = ("curl v x N", "iota_N d v_flat")


@dataclass
class BCResidual:
    kind: BCKind
    routes: dict = field(default_factory=dict)  # tag -> (..., 2) tangential components
    penetration: np.ndarray | None = None  # g(v, N) at the point

    def gap(self) -> np.ndarray:
        """Largest pairwise route discrepancy per point."""
        vals = list(self.routes.values())
        out = np.zeros(vals[0].shape[:-1])
        for r1, r2 in combinations(vals, 2):
            out = np.maximum(out, np.max(np.abs(r1 - r2), axis=-1))
        return out

    def magnitude(self) -> np.ndarray:
        """Max-abs of the route values per point."""
        return np.max(np.stack([np.max(np.abs(v), axis=-1) for v in self.routes.values()]), axis=0)

    def satisfied(self, tol: float) -> np.ndarray:
        return self.magnitude() < tol


def _as_shell(q) -> ShellPoint:
    return q.shell() if isinstance(q, SurfacePoint) else q


def _setup(params, v, q):
    q = _as_shell(q)
    check_pole(params, q.phi)
    check_chart(params, q)
    x = embed(params, q)
    fr = frame_at(params, q)
    vx = np.asarray(v(x), float)
    return q, x, fr, vx


def shape_matrix(params: EllipsoidParams, q) -> np.ndarray:
    """Closed-form shape operator of the shell through ``q`` as a diagonal 2x2 in the frame."""
    q = _as_shell(q)
    k1, k2 = shell_curvatures(params, q)
    out = np.zeros(np.shape(k1) + (2, 2))
    out[..., 0, 0] = k1
    out[..., 1, 1] = k2
    return out


def shell_shape_check(params: EllipsoidParams, q, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Max-abs difference between FD Weingarten columns s(E_i) and the closed form, per point."""
    q = _as_shell(q)
    s = shape_matrix(params, q)
    shape = np.shape(q.phi)
    res = np.zeros(shape)
    for i in range(2):
        e = np.zeros(shape + (2,))
        e[..., i] = 1.0
        col = shape_operator(params, q, e, h, order)
        res = np.maximum(res, np.max(np.abs(col - s[..., :, i]), axis=-1))
    return res


def navier_residual(params: EllipsoidParams, v: AmbientField, q, bc: BCKind | None = None, h: float = DEFAULT_H, order: int = 2) -> BCResidual:
    """Tangential Navier residual by the deformation, bracket and curl routes.

    A nonzero normal component of ``v`` does not stop the evaluation; it is
    returned as ``penetration``.
    """
    bc = bc or BCKind(BCTag.NAVIER)
    q, x, fr, vx = _setup(params, v, q)
    nf = normal_field(params, q.chart)
    n = fr.n
    vt = fr.components(vx)[..., :2]
    fric = bc.friction * vt

    jac = fd.jacobian(v, x, h, order)
    two_def_n = np.einsum("...ij,...j->...i", jac + np.swapaxes(jac, -1, -2), n)
    deform = fr.components(two_def_n)[..., :2] + fric

    bracket = fr.components(lie_bracket(nf, v, x, h, order))[..., :2] + fric

    cross = np.cross(curl(v, x, h, order), n)
    sv = np.einsum("...ij,...j->...i", shape_matrix(params, q), vt)
    curl_route = fr.components(cross)[..., :2] + 2.0 * sv + fric

    routes = dict(zip(NAVIER_ROUTES, (deform, bracket, curl_route)))
    return BCResidual(bc, routes, np.sum(vx * n, axis=-1))


def _contract_normal(v, x, fr, h, order):
    """(iota_N d v_flat)(E_i) = g(D_N v, E_i) - g(D_{E_i} v, N), from directional differences."""
    dn = fd.directional(v, x, fr.n, h, order)
    return np.stack(
        [np.sum(dn * e, axis=-1) - np.sum(fd.directional(v, x, e, h, order) * fr.n, axis=-1) for e in (fr.e1, fr.e2)],
        axis=-1,
    )


def hodge_residual(params: EllipsoidParams, v: AmbientField, q, h: float = DEFAULT_H, order: int = 2) -> BCResidual:
    """Tangential Hodge residual: curl v x N against the contraction of d v_flat with N."""
    q, x, fr, vx = _setup(params, v, q)
    n = fr.n
    cross = fr.components(np.cross(curl(v, x, h, order), n))[..., :2]
    contraction = _contract_normal(v, x, fr, h, order)
    return BCResidual(BCKind(BCTag.HODGE), dict(zip(HODGE_ROUTES, (cross, contraction))), np.sum(vx * n, axis=-1))


def lie_derivative_form_tangential(params: EllipsoidParams, v: AmbientField, q, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Tangential part of (L_N v_flat)^sharp = iota_N d v_flat + d(g(N, v)), in the frame."""
    q, x, fr, _ = _setup(params, v, q)
    nf = normal_field(params, q.chart)
    dv = exterior_derivative(v, x, h, order)
    contraction = fr.components(np.einsum("...j,...jk->...k", fr.n, dv))[..., :2]

    def pairing(y):
        return np.sum(nf(y) * v(y), axis=-1)

    exact = np.stack([fd.directional(pairing, x, e, h, order) for e in (fr.e1, fr.e2)], axis=-1)
    return contraction + exact


def nh_relation_check(params: EllipsoidParams, v: AmbientField, q, h: float = DEFAULT_H, order: int = 2) -> np.ndarray:
    """Residual of ((L_N v_flat)^sharp)_tan = [N, v]_tan - 2 s v, per point (max-abs)."""
    q, x, fr, vx = _setup(params, v, q)
    lhs = lie_derivative_form_tangential(params, v, q, h, order)
    bracket = fr.components(lie_bracket(normal_field(params, q.chart), v, x, h, order))[..., :2]
    sv = np.einsum("...ij,...j->...i", shape_matrix(params, q), fr.components(vx)[..., :2])
    return np.max(np.abs(lhs - (bracket - 2.0 * sv)), axis=-1)


def residual(params: EllipsoidParams, bc: BCKind, v: AmbientField, q, h: float = DEFAULT_H, order: int = 2) -> BCResidual:
    if bc.tag is BCTag.NAVIER:
        return navier_residual(params, v, q, bc, h, order)
    return hodge_residual(params, v, q, h, order)


__all__ = [
    "BCKind",
    "BCResidual",
    "BCTag",
    "HODGE_ROUTES",
    "NAVIER_ROUTES",
    "Chart",
    "hodge_residual",
    "lie_derivative_form_tangential",
    "navier_residual",
    "nh_relation_check",
    "residual",
    "shape_matrix",
    "shell_shape_check",
]
