"""Geometry of the ellipsoid of revolution E = {x^2 + y^2 + a^2 z^2 = a^2}.

Two charts cover a band around E:

* the scaling chart (rho, phi, theta) with
  x = (a rho sin(phi) cos(theta), a rho sin(phi) sin(theta), rho cos(phi)),
  whose level sets rho = const are the rescaled ellipsoids;
* the normal chart (sigma, phi, theta) with x = p(phi, theta) + sigma N(p),
  the tubular neighbourhood swept by straight normal lines.

Sign conventions: N is the outward unit normal, the shape operator is
``s X = -D_X N`` and both principal curvatures are negative.

All functions are vectorized: angles and radial coordinates may be arrays of
any (broadcast-compatible) shape, Cartesian vectors carry a trailing axis of
length 3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import fd

DEFAULT_DELTA_POLE = 1e-2
DEFAULT_H = 1e-4


class GeometryError(ValueError):
    """Base class for invalid evaluation points."""


class PoleExclusionError(GeometryError):
    pass


class ChartValidityError(GeometryError):
    pass


@dataclass(frozen=True)
class EllipsoidParams:
    """Semi-axis ratio ``a`` plus the polar band excluded from evaluation."""

    a: float
    delta_pole: float = DEFAULT_DELTA_POLE

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0):
            raise ValueError(f"semi-axis ratio must be positive, got {self.a!r}")
        if not (0 <= self.delta_pole < np.pi / 2):
            raise ValueError(f"delta_pole must lie in [0, pi/2), got {self.delta_pole!r}")

    def rho(self, x):
        """Defining function rho(x) = sqrt((x^2 + y^2)/a^2 + z^2); E is rho = 1."""
        x = np.asarray(x, dtype=float)
        return np.sqrt((x[..., 0] ** 2 + x[..., 1] ** 2) / self.a**2 + x[..., 2] ** 2)


class Chart(str, enum.Enum):
    SCALING = "scaling"
    NORMAL = "normal"


@dataclass(frozen=True)
class SurfacePoint:
    phi: np.ndarray
    theta: np.ndarray

    def __init__(self, phi, theta):
        phi, theta = np.broadcast_arrays(np.asarray(phi, float), np.asarray(theta, float))
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", wrap_angle(theta))

    def shell(self, chart: Chart = Chart.SCALING) -> "ShellPoint":
        radial = 1.0 if chart is Chart.SCALING else 0.0
        return ShellPoint(chart, np.full_like(self.phi, radial), self.phi, self.theta)


@dataclass(frozen=True)
class ShellPoint:
    """A point of the band around E; ``radial`` is rho (scaling) or sigma (normal)."""

    chart: Chart
    radial: np.ndarray
    phi: np.ndarray
    theta: np.ndarray

    def __init__(self, chart, radial, phi, theta):
        radial, phi, theta = np.broadcast_arrays(
            np.asarray(radial, float), np.asarray(phi, float), np.asarray(theta, float)
        )
        object.__setattr__(self, "chart", Chart(chart))
        object.__setattr__(self, "radial", radial)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", wrap_angle(theta))

    @classmethod
    def scaling(cls, rho, phi, theta):
        return cls(Chart.SCALING, rho, phi, theta)

    @classmethod
    def normal(cls, sigma, phi, theta):
        return cls(Chart.NORMAL, sigma, phi, theta)

    @property
    def surface(self) -> SurfacePoint:
        return SurfacePoint(self.phi, self.theta)


Point = Union[SurfacePoint, ShellPoint]


@dataclass(frozen=True)
class Frame:
    """Orthonormal frame {E1, E2, N} as Cartesian vectors (trailing axis 3)."""

    e1: np.ndarray
    e2: np.ndarray
    n: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        """Rows E1, E2, N: ``matrix @ v`` gives frame components of ``v``."""
        return np.stack([self.e1, self.e2, self.n], axis=-2)

    def components(self, v) -> np.ndarray:
        return np.einsum("...ij,...j->...i", self.matrix, np.asarray(v, float))

    def vector(self, comps) -> np.ndarray:
        """Cartesian vector from 2 (tangential) or 3 frame components."""
        comps = np.asarray(comps, float)
        out = comps[..., 0, None] * self.e1 + comps[..., 1, None] * self.e2
        if comps.shape[-1] == 3:
            out = out + comps[..., 2, None] * self.n
        return out

    def gram_residual(self) -> np.ndarray:
        m = self.matrix
        gram = np.einsum("...ik,...jk->...ij", m, m)
        return np.max(np.abs(gram - np.eye(3)), axis=(-2, -1))

    def orientation(self) -> np.ndarray:
        return np.einsum("...i,...i->...", self.n, np.cross(self.e1, self.e2))


@dataclass(frozen=True)
class CurvatureData:
    kappa1: np.ndarray
    kappa2: np.ndarray
    gauss: np.ndarray
    mean2: np.ndarray
    grad_rho_norm: np.ndarray

    @property
    def sqrt_gauss(self) -> np.ndarray:
        # positive root: K_E = 1/lambda^4 > 0
        return np.sqrt(self.gauss)


def wrap_angle(theta):
    """Wrap an azimuth into [-pi, pi)."""
    return np.mod(np.asarray(theta, float) + np.pi, 2.0 * np.pi) - np.pi


def _phi_of(p) -> np.ndarray:
    return p.phi if hasattr(p, "phi") else np.asarray(p, float)


def check_pole(params: EllipsoidParams, phi) -> None:
    phi = np.asarray(phi, float)
    d = params.delta_pole
    if np.any(phi < d) | np.any(phi > np.pi - d) | np.any(~np.isfinite(phi)):
        raise PoleExclusionError(
            f"phi must lie in [{d:g}, pi - {d:g}]; got range "
            f"[{np.min(phi):.6g}, {np.max(phi):.6g}]"
        )


def normal_sigma_bound(params: EllipsoidParams) -> float:
    """Half the smallest radius of curvature of E: the normal chart is injective below it."""
    a = params.a
    kmax = a if a >= 1.0 else 1.0 / a**2
    return 0.5 / kmax


def check_chart(params: EllipsoidParams, q: ShellPoint) -> None:
    if q.chart is Chart.NORMAL:
        bound = normal_sigma_bound(params)
        if np.any(np.abs(q.radial) >= bound):
            raise ChartValidityError(
                f"|sigma| must stay below {bound:.6g} for a = {params.a:g}; "
                f"got {np.max(np.abs(q.radial)):.6g}"
            )
    elif np.any(q.radial <= 0.5) or np.any(q.radial >= 1.5):
        raise ChartValidityError(
            f"rho must lie in (0.5, 1.5); got [{np.min(q.radial):.6g}, {np.max(q.radial):.6g}]"
        )


# ---------------------------------------------------------------------------
# scalar helpers


def lam(params: EllipsoidParams, p) -> np.ndarray:
    """lambda = sqrt(a^2 cos^2(phi) + sin^2(phi)), written so that a = 1 gives exactly 1."""
    c = np.cos(_phi_of(p))
    return np.sqrt(1.0 + (params.a**2 - 1.0) * c * c)


def dlam_dphi(params: EllipsoidParams, phi) -> np.ndarray:
    phi = np.asarray(phi, float)
    return (1.0 - params.a**2) * np.sin(phi) * np.cos(phi) / lam(params, phi)


def g_rho_phi_upper(params: EllipsoidParams, rho, phi) -> np.ndarray:
    """Inverse-metric entry g^{rho phi} of the scaling chart."""
    phi = np.asarray(phi, float)
    a2 = params.a**2
    return (1.0 - a2) * np.sin(phi) * np.cos(phi) / (a2 * np.asarray(rho, float))


def tilt(params: EllipsoidParams, phi) -> np.ndarray:
    """a * g^{rho phi} on E (equivalently a * rho * g^{rho phi} anywhere in the band).

    It is the E1 coefficient of the normal derivative:
    N(h) = (lambda/a) d_rho h + tilt * E1(h).
    """
    return params.a * g_rho_phi_upper(params, 1.0, phi)


def c313(params: EllipsoidParams, p) -> np.ndarray:
    """Structure constant c^3_13 = a^2 g^{rho phi} / lambda^3 on E."""
    phi = _phi_of(p)
    return params.a**2 * g_rho_phi_upper(params, 1.0, phi) / lam(params, phi) ** 3


def curvatures(params: EllipsoidParams, p) -> CurvatureData:
    phi = _phi_of(p)
    a = params.a
    L = lam(params, phi)
    k1 = -a / L**3
    k2 = -1.0 / (a * L)
    return CurvatureData(
        kappa1=k1, kappa2=k2, gauss=1.0 / L**4, mean2=k1 + k2, grad_rho_norm=L / a
    )


def shell_curvatures(params: EllipsoidParams, q: ShellPoint) -> tuple[np.ndarray, np.ndarray]:
    """Principal curvatures of the shell surface through ``q``.

    Rescaled ellipsoid rho = const: kappa_i / rho.  Parallel surface at
    distance sigma: kappa_i / (1 - sigma kappa_i).
    """
    cd = curvatures(params, q.phi)
    r = q.radial
    if q.chart is Chart.SCALING:
        return cd.kappa1 / r, cd.kappa2 / r
    return cd.kappa1 / (1.0 - r * cd.kappa1), cd.kappa2 / (1.0 - r * cd.kappa2)


# ---------------------------------------------------------------------------
# metrics


def metric_scaling(params: EllipsoidParams, q: ShellPoint) -> tuple[np.ndarray, np.ndarray]:
    """Metric and inverse metric of the scaling chart, ordered (rho, phi, theta)."""
    if q.chart is not Chart.SCALING:
        raise ChartValidityError("metric_scaling needs a scaling-chart point")
    check_pole(params, q.phi)
    a2 = params.a**2
    r, s, c = q.radial, np.sin(q.phi), np.cos(q.phi)
    L2 = lam(params, q.phi) ** 2
    shape = r.shape + (3, 3)
    g = np.zeros(shape)
    g[..., 0, 0] = a2 * s * s + c * c
    g[..., 0, 1] = g[..., 1, 0] = (a2 - 1.0) * r * s * c
    g[..., 1, 1] = r * r * L2
    g[..., 2, 2] = a2 * r * r * s * s
    gi = np.zeros(shape)
    gi[..., 0, 0] = L2 / a2
    gi[..., 0, 1] = gi[..., 1, 0] = g_rho_phi_upper(params, r, q.phi)
    gi[..., 1, 1] = (a2 * s * s + c * c) / (a2 * r * r)
    gi[..., 2, 2] = 1.0 / (a2 * r * r * s * s)
    return g, gi


def metric_normal(params: EllipsoidParams, q: ShellPoint) -> np.ndarray:
    """Diagonal of the Euclidean metric in the normal chart, ordered (sigma, phi, theta)."""
    if q.chart is not Chart.NORMAL:
        raise ChartValidityError("metric_normal needs a normal-chart point")
    check_pole(params, q.phi)
    check_chart(params, q)
    a = params.a
    L = lam(params, q.phi)
    sig = q.radial
    out = np.empty(sig.shape + (3,))
    out[..., 0] = 1.0
    out[..., 1] = ((1.0 + sig * a / L**3) * L) ** 2
    out[..., 2] = ((1.0 + sig / (a * L)) * a * np.sin(q.phi)) ** 2
    return out


# ---------------------------------------------------------------------------
# embeddings and inverse charts


def surface_normal(params: EllipsoidParams, phi, theta) -> np.ndarray:
    phi, theta = np.asarray(phi, float), np.asarray(theta, float)
    s = np.sin(phi)
    v = np.stack([s * np.cos(theta), s * np.sin(theta), params.a * np.cos(phi)], axis=-1)
    return v / lam(params, phi)[..., None]


def embed(params: EllipsoidParams, q: Point) -> np.ndarray:
    """Cartesian image of a chart point (SurfacePoint maps onto E)."""
    if isinstance(q, SurfacePoint):
        q = q.shell()
    a = params.a
    s, c = np.sin(q.phi), np.cos(q.phi)
    if q.chart is Chart.SCALING:
        r = q.radial
        return np.stack(
            [a * r * s * np.cos(q.theta), a * r * s * np.sin(q.theta), r * c], axis=-1
        )
    base = np.stack([a * s * np.cos(q.theta), a * s * np.sin(q.theta), c], axis=-1)
    return base + q.radial[..., None] * surface_normal(params, q.phi, q.theta)


def scaling_coords(params: EllipsoidParams, x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.asarray(x, float)
    rxy = np.hypot(x[..., 0], x[..., 1])
    rho = params.rho(x)
    phi = np.arctan2(rxy / params.a, x[..., 2])
    theta = np.arctan2(x[..., 1], x[..., 0])
    return rho, phi, theta


def normal_coords(
    params: EllipsoidParams, x, max_iter: int = 50
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Invert x = p(phi, theta) + sigma N(p) by Newton iteration in the meridian plane."""
    x = np.asarray(x, float)
    a = params.a
    R = np.hypot(x[..., 0], x[..., 1])
    Z = x[..., 2]
    rho, phi, theta = scaling_coords(params, x)
    sig = (rho - 1.0) * a / lam(params, phi)
    for _ in range(max_iter):
        s, c = np.sin(phi), np.cos(phi)
        L = lam(params, phi)
        dL = dlam_dphi(params, phi)
        f1 = (a + sig / L) * s - R
        f2 = (1.0 + a * sig / L) * c - Z
        j11 = (a + sig / L) * c - sig * dL * s / L**2
        j12 = s / L
        j21 = -(1.0 + a * sig / L) * s - a * sig * dL * c / L**2
        j22 = a * c / L
        det = j11 * j22 - j12 * j21
        dphi = -(j22 * f1 - j12 * f2) / det
        dsig = -(-j21 * f1 + j11 * f2) / det
        phi = phi + dphi
        sig = sig + dsig
        if np.max(np.abs(dphi), initial=0.0) < 1e-15 and np.max(np.abs(dsig), initial=0.0) < 1e-15:
            break
    return sig, phi, theta


def chart_coords(params: EllipsoidParams, x, chart: Chart):
    chart = Chart(chart)
    if chart is Chart.SCALING:
        return scaling_coords(params, x)
    return normal_coords(params, x)


# ---------------------------------------------------------------------------
# frames


def frame_at(params: EllipsoidParams, q: Point) -> Frame:
    """Orthonormal frame {E1, E2, N} at a chart point.

    Scaling chart: E1 = d_phi/(rho lambda), E2 = d_theta/(a rho sin(phi)),
    N = grad(rho)/|grad(rho)|.  Normal chart: the coordinate vectors of
    p + sigma N(p), normalized with the metric factors (1 - sigma kappa_i),
    and N = d_sigma.
    """
    if isinstance(q, SurfacePoint):
        q = q.shell()
    check_pole(params, q.phi)
    return _frame_unchecked(params, q)


def _frame_unchecked(params: EllipsoidParams, q: ShellPoint) -> Frame:
    a = params.a
    s, c = np.sin(q.phi), np.cos(q.phi)
    ct, st = np.cos(q.theta), np.sin(q.theta)
    L = lam(params, q.phi)
    if q.chart is Chart.SCALING:
        r = q.radial
        dphi = np.stack([a * r * c * ct, a * r * c * st, -r * s], axis=-1)
        dtheta = np.stack([-a * r * s * st, a * r * s * ct, np.zeros_like(s)], axis=-1)
        e1 = dphi / (r * L)[..., None]
        e2 = dtheta / (a * r * s)[..., None]
        x = embed(params, q)
        grad = np.stack([x[..., 0] / a**2, x[..., 1] / a**2, x[..., 2]], axis=-1) / r[..., None]
        n = grad / (L / a)[..., None]
        return Frame(e1, e2, n)
    sig = q.radial
    dL = dlam_dphi(params, q.phi)
    rad = (a + sig / L) * c - sig * dL * s / L**2
    vert = -(1.0 + a * sig / L) * s - a * sig * dL * c / L**2
    dphi = np.stack([rad * ct, rad * st, vert], axis=-1)
    dtheta = np.stack([-(a + sig / L) * s * st, (a + sig / L) * s * ct, np.zeros_like(s)], axis=-1)
    cd = curvatures(params, q.phi)
    e1 = dphi / ((1.0 - sig * cd.kappa1) * L)[..., None]
    e2 = dtheta / ((1.0 - sig * cd.kappa2) * a * s)[..., None]
    n = surface_normal(params, q.phi, q.theta)
    return Frame(e1, e2, n)


def frame_field(params: EllipsoidParams, x, chart: Chart = Chart.SCALING) -> Frame:
    """The frame as a field on R^3, evaluated at Cartesian points ``x``.

    Both frames are constant along their radial lines, so only (phi, theta)
    of the chart matters.
    """
    _, phi, theta = chart_coords(params, x, chart)
    a = params.a
    s, c = np.sin(phi), np.cos(phi)
    ct, st = np.cos(theta), np.sin(theta)
    L = lam(params, phi)[..., None]
    e1 = np.stack([a * c * ct, a * c * st, -s], axis=-1) / L
    e2 = np.stack([-st, ct, np.zeros_like(s)], axis=-1)
    n = surface_normal(params, phi, theta)
    return Frame(e1, e2, n)


def normal_field(params: EllipsoidParams, chart: Chart = Chart.SCALING):
    """Unit normal field of the shell family as a Cartesian closure.

    Scaling: grad(rho)/|grad(rho)|, evaluated straight from the Cartesian
    gradient.  Normal: N of the foot point, constant along normal lines.
    """
    a = params.a
    if Chart(chart) is Chart.SCALING:

        def n_scaling(x):
            x = np.asarray(x, float)
            g = np.stack([x[..., 0] / a**2, x[..., 1] / a**2, x[..., 2]], axis=-1)
            return g / np.linalg.norm(g, axis=-1, keepdims=True)

        return n_scaling

    def n_normal(x):
        _, phi, theta = normal_coords(params, x)
        return surface_normal(params, phi, theta)

    return n_normal


def grad_rho_norm_cartesian(params: EllipsoidParams, x) -> np.ndarray:
    x = np.asarray(x, float)
    a = params.a
    g = np.stack([x[..., 0] / a**2, x[..., 1] / a**2, x[..., 2]], axis=-1)
    return np.linalg.norm(g, axis=-1) / params.rho(x)


# ---------------------------------------------------------------------------
# derivatives along E


def e1_derivative(params: EllipsoidParams, f, phi, theta, h: float = DEFAULT_H, order: int = 2):
    """E1(f) on E for ``f(phi, theta)``: (1/lambda) d_phi f.  Trailing component axes allowed."""
    phi = np.asarray(phi, float)
    d = fd.derivative(lambda t: f(t, theta), phi, h, order)
    L = lam(params, phi)
    return d / L.reshape(L.shape + (1,) * (np.ndim(d) - L.ndim))


def theta_step(params: EllipsoidParams, phi, h: float, radial=1.0):
    """Azimuthal increment that moves arc length ``h`` along a parallel.

    Differencing in theta with a fixed step would divide roundoff by
    (a sin(phi))^2 in second derivatives near the poles; an arc-length step
    keeps the conditioning uniform over the sampled band.
    """
    return h / (params.a * radial * np.sin(np.asarray(phi, float)))


def e2_derivative(params: EllipsoidParams, f, phi, theta, h: float = DEFAULT_H, order: int = 2):
    """E2(f) on E: d_theta f / (a sin(phi)), differenced with arc-length step h."""
    phi = np.asarray(phi, float)
    theta = np.asarray(theta, float)
    ht = np.broadcast_to(theta_step(params, phi, h), np.broadcast(phi, theta).shape)
    d = fd.derivative(lambda t: f(phi, t), theta, ht, order)
    den = params.a * np.sin(phi)
    return d / den.reshape(den.shape + (1,) * (np.ndim(d) - den.ndim))


def c313_routes(params: EllipsoidParams, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2):
    """Three evaluations of c^3_13: closed form, -E1(log K_E)/4, E1|grad rho| / |grad rho|."""
    check_pole(params, p.phi)
    closed = c313(params, p)

    def log_gauss(phi, theta):
        cd = curvatures(params, phi)
        return np.log(cd.kappa1 * cd.kappa2) + 0.0 * theta

    from_gauss = -0.25 * e1_derivative(params, log_gauss, p.phi, p.theta, h, order)

    def grad_norm(phi, theta):
        return grad_rho_norm_cartesian(params, embed(params, SurfacePoint(phi, theta)))

    from_grad = e1_derivative(params, grad_norm, p.phi, p.theta, h, order) / grad_norm(
        p.phi, p.theta
    )
    return closed, from_gauss, from_grad


def shape_operator(
    params: EllipsoidParams, q: Point, x, h: float = DEFAULT_H, order: int = 2
) -> np.ndarray:
    """Shape operator ``s X = -D_X N`` by centered differences of the Cartesian normal field.

    ``x`` holds tangential frame components (..., 2); a third component, if
    given, must vanish.  Works on E and on the shells of either chart; the
    result is in the frame at ``q`` (tangential components).
    """
    if isinstance(q, SurfacePoint):
        q = q.shell()
    x = np.asarray(x, float)
    if x.shape[-1] == 3:
        if np.any(np.abs(x[..., 2]) > 1e-12):
            raise ValueError("shape operator argument must be tangential")
        x = x[..., :2]
    fr = frame_at(params, q)
    d = fr.vector(np.broadcast_to(x, fr.e1.shape[:-1] + (2,)))
    dn = fd.directional(normal_field(params, q.chart), embed(params, q), d, h, order)
    return -fr.components(dn)[..., :2]


def connection_on_E(params: EllipsoidParams, p) -> np.ndarray:
    """Connection coefficients ``G[..., k, i, j]`` with ``nabla_{E_i} E_j = G[k, i, j] E_k``.

    Only Gamma^2_21 = cot(phi)/lambda and Gamma^1_22 = -cot(phi)/lambda are nonzero.
    """
    phi = _phi_of(p)
    check_pole(params, phi)
    return connection_table(params, phi)


def connection_table(params: EllipsoidParams, phi) -> np.ndarray:
    """:func:`connection_on_E` without the polar-band check (used inside difference stencils)."""
    phi = np.asarray(phi, float)
    k = 1.0 / (np.tan(phi) * lam(params, phi))
    out = np.zeros(np.shape(phi) + (2, 2, 2))
    out[..., 1, 1, 0] = k
    out[..., 0, 1, 1] = -k
    return out


def connection_fd(params: EllipsoidParams, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2):
    """Same coefficients as :func:`connection_on_E`, from the tangential part of D_{E_i} E_j.

    The Euclidean derivatives are taken along the coordinate curves through
    p, which stay on E and resolve the small parallel circles near the poles.
    """
    check_pole(params, p.phi)
    fr = frame_at(params, p)
    phi, theta = p.phi, p.theta

    def frame_mat(pp, tt):
        # stencil points may step just past the pole band
        return _frame_unchecked(params, ShellPoint.scaling(np.ones_like(pp), pp, tt)).matrix

    d_phi = fd.derivative(lambda t: frame_mat(t, theta), phi, h, order) / lam(params, phi)[..., None, None]
    d_theta = fd.derivative(lambda t: frame_mat(phi, t), theta, h, order) / (params.a * np.sin(phi))[..., None, None]
    out = np.zeros(p.phi.shape + (2, 2, 2))
    for i, d in enumerate((d_phi, d_theta)):
        for j in range(2):
            comps = fr.components(d[..., j, :])
            out[..., 0, i, j] = comps[..., 0]
            out[..., 1, i, j] = comps[..., 1]
    return out


def helpful_closed_forms(params: EllipsoidParams, phi) -> dict:
    """Right-hand sides of the lambda identities for tilt, lambda and c^3_13."""
    a = params.a
    L = lam(params, phi)
    a2 = a * a
    return {
        "a2_grhophi_sq": (L**2 - a2 - L**4 + a2 * L**2) / a2,
        "e1_tilt": 1.0 / (a * L) + a / L - 2.0 * L / a,
        "e1_lambda": a2 * g_rho_phi_upper(params, 1.0, phi) / L**2,
        "e1_c313": -2.0 * (1.0 + a2) / L**4 + 1.0 / L**2 + 3.0 * a2 / L**6,
        "c313_sq": 1.0 / L**4 - a2 / L**6 - 1.0 / L**2 + a2 / L**4,
    }


HELPFUL_NAMES = ("a2_grhophi_sq", "e1_tilt", "e1_lambda", "e1_c313", "c313_sq")


def helpful_suite(
    params: EllipsoidParams, p: SurfacePoint, h: float = DEFAULT_H, order: int = 2
) -> np.ndarray:
    """Residuals (..., 5) of the five lambda identities, ordered as ``HELPFUL_NAMES``.

    Derivatives on the left-hand sides are centered differences along E1.
    """
    check_pole(params, p.phi)
    phi, theta = p.phi, p.theta
    a = params.a
    rhs = helpful_closed_forms(params, phi)
    g = g_rho_phi_upper(params, 1.0, phi)

    def along_e1(f):
        return e1_derivative(params, lambda t, _th: f(t), phi, theta, h, order)

    lhs = {
        "a2_grhophi_sq": a * a * g * g,
        "e1_tilt": along_e1(lambda t: tilt(params, t)),
        "e1_lambda": along_e1(lambda t: lam(params, t)),
        "e1_c313": along_e1(lambda t: c313(params, t)),
        "c313_sq": c313(params, phi) ** 2,
    }
    return np.stack([np.abs(lhs[k] - rhs[k]) for k in HELPFUL_NAMES], axis=-1)
