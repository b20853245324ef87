"""Verification suites behind ``shellvisc verify``.

Each suite turns a module's invariants into named checks evaluated on seeded
samples for every configured semi-axis ratio.  A check is either a residual
bound (max over samples below a tolerance) or a convergence slope inside a
window.  Stencil policy: residual checks use the fourth-order stencil at the
configured step; slope checks use the second-order stencil, whose order is
what they measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import boundary as bd
from . import fd
from . import fieldcalc as fc
from . import geometry as geo
from . import operators as ops
from . import thinshell as ts
from .fields import extend_along_rays, preset, random_divfree, random_field, rotation
from .geometry import Chart, EllipsoidParams, ShellPoint, SurfacePoint

SUITES = ("geometry", "identities", "boundary", "operators", "limits")

# nominal tolerance of each suite (overridable with --tol.<suite>)
DEFAULT_TOLERANCES = {
    "geometry": 1e-6,
    "identities": 1e-6,
    "boundary": 1e-6,
    "operators": 1e-5,
    "limits": 1e-4,
}
DEFAULT_SAMPLES = {"geometry": 1000, "identities": 1000, "boundary": 200, "operators": 200, "limits": 100}

# pinned tiers of the tolerance ladder
TOL_FRAME = 1e-12
TOL_CLOSED = 1e-10
TOL_FD1 = 1e-6
TOL_FD2 = 1e-5

RESIDUAL_ORDER = 4
SLOPE_ORDER = 2
SLOPE_STEPS = (1e-3, 5e-4, 2.5e-4)
CART_SLOPE_STEPS = (1e-2, 5e-3, 2.5e-3)
SLOPE_WINDOW = (1.8, 2.2)
REPLAY_SLOPE_WINDOW = (1.7, 2.3)
# below this the error is roundoff, so a fitted slope carries no information
EXACT_FLOOR = 1e-10

N_FIELDS = 10
N_SLOPE_POINTS = 40


@dataclass
class RunConfig:
    a_values: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0])
    samples: int | None = None
    seed: int = 0
    h_first: float = geo.DEFAULT_H
    h_second: float = ts.DEFAULT_H_CART
    tolerances: dict = field(default_factory=dict)
    delta_pole: float = geo.DEFAULT_DELTA_POLE
    grid: tuple = (64, 128)

    def __post_init__(self):
        if not self.a_values or any(not (np.isfinite(a) and a > 0) for a in self.a_values):
            raise ValueError("a-values must be positive reals")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        for name in ("h_first", "h_second", "delta_pole"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if len(self.grid) != 2 or min(self.grid) < 2:
            raise ValueError("grid needs two integers >= 2")
        unknown = set(self.tolerances) - set(SUITES)
        if unknown:
            raise ValueError(f"tolerance given for unknown suite(s): {', '.join(sorted(unknown))}")
        for k, v in self.tolerances.items():
            if not v > 0:
                raise ValueError(f"tolerance for {k} must be positive")

    def tol(self, suite: str) -> float:
        return float(self.tolerances.get(suite, DEFAULT_TOLERANCES[suite]))

    def n_samples(self, suite: str) -> int:
        return int(self.samples or DEFAULT_SAMPLES[suite])

    def echo(self) -> dict:
        return {
            "a_values": [float(a) for a in self.a_values],
            "samples": self.samples,
            "seed": int(self.seed),
            "h_first": float(self.h_first),
            "h_second": float(self.h_second),
            "tolerances": {s: self.tol(s) for s in SUITES},
            "delta_pole": float(self.delta_pole),
            "grid": [int(g) for g in self.grid],
        }


@dataclass
class Check:
    """One named check at one semi-axis ratio."""

    id: str
    tag: str
    a: float
    values: np.ndarray | None = None
    tol: float | None = None
    slope: float | None = None
    window: tuple | None = None
    steps: list | None = None
    errors: list | None = None
    lower: float | None = None  # checks of the form value >= lower
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.slope is not None:
            if self.errors is not None and max(self.errors) < EXACT_FLOOR and self.window[0] > 0.5:
                return True  # exact up to roundoff: better than any power of the step
            return bool(self.window[0] <= self.slope <= self.window[1])
        v = np.asarray(self.values, float)
        if not np.all(np.isfinite(v)):
            return False
        if self.lower is not None:
            return bool(np.min(v) >= self.lower)
        return bool(np.max(v, initial=0.0) < self.tol)

    def to_dict(self) -> dict:
        out = {"id": self.id, "tag": self.tag, "a": float(self.a)}
        if self.slope is not None:
            out.update(
                steps=[float(s) for s in self.steps],
                errors=[float(e) for e in self.errors],
                slope=float(self.slope),
                window=[float(w) if np.isfinite(w) else None for w in self.window],  # open ends as null
            )
        else:
            v = np.asarray(self.values, float).ravel()
            out.update(
                n=int(v.size),
                max=float(np.max(v)),
                mean=float(np.mean(v)),
                p99=float(np.percentile(v, 99)),
            )
            if self.lower is not None:
                out.update(min=float(np.min(v)), lower=float(self.lower))
            else:
                out.update(tol=float(self.tol))
        if self.note:
            out["note"] = self.note
        out["passed"] = self.passed
        return out


def _rng(seed: int, suite: str, a_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed, SUITES.index(suite), a_index])
    return np.random.Generator(np.random.PCG64(ss))


def sample_points(params: EllipsoidParams, rng: np.random.Generator, n: int) -> SurfacePoint:
    d = params.delta_pole
    return SurfacePoint(rng.uniform(d, np.pi - d, n), rng.uniform(-np.pi, np.pi, n))


def _subset(p: SurfacePoint, idx) -> SurfacePoint:
    return SurfacePoint(p.phi[idx], p.theta[idx])


def _field_seeds(rng, n):
    return [int(s) for s in rng.integers(0, 2**31, n)]


def _per_field(params, p, seeds, make, fn) -> np.ndarray:
    """Evaluate ``fn(field, points)`` with the sample points split across seeded fields."""
    out = []
    for k, idx in enumerate(np.array_split(np.arange(p.phi.size), len(seeds))):
        if idx.size:
            out.append(np.asarray(fn(make(params, seeds[k]), _subset(p, idx))))
    return np.concatenate(out, axis=0)


def _slope_check(cid, tag, a, steps, err_fn, window=SLOPE_WINDOW) -> Check:
    errs = [float(err_fn(h)) for h in steps]
    slope, _ = fd.loglog_slope(steps, errs)
    return Check(cid, tag, a, slope=slope, window=window, steps=list(steps), errors=errs)


# ---------------------------------------------------------------------------
# suites


def suite_geometry(cfg: RunConfig, params: EllipsoidParams, rng) -> list[Check]:
    a = params.a
    n = cfg.n_samples("geometry")
    tol = cfg.tol("geometry")
    h = cfg.h_first
    p = sample_points(params, rng, n)
    checks = []

    rho = rng.uniform(0.6, 1.4, n)
    sigma = rng.uniform(-0.9, 0.9, n) * geo.normal_sigma_bound(params)
    frame_res = []
    for chart, rad in ((Chart.SCALING, rho), (Chart.NORMAL, sigma)):
        fr = geo.frame_at(params, ShellPoint(chart, rad, p.phi, p.theta))
        frame_res.append(np.maximum(fr.gram_residual(), np.abs(fr.orientation() - 1.0)))
    checks.append(Check("frame-orthonormality", "<E_i,E_j> = delta_ij, N.(E1 x E2) = 1", a, np.maximum(*frame_res), TOL_FRAME))

    f_s = geo.frame_at(params, p.shell(Chart.SCALING))
    f_n = geo.frame_at(params, p.shell(Chart.NORMAL))
    coin = np.max(np.abs(f_s.matrix - f_n.matrix), axis=(-2, -1))
    checks.append(Check("chart-coincidence", "frame(rho=1) = frame(sigma=0)", a, coin, TOL_FRAME))

    q = ShellPoint.normal(sigma, p.phi, p.theta)
    s_back, phi_back, th_back = geo.normal_coords(params, geo.embed(params, q))
    inv = np.maximum(np.abs(s_back - sigma), np.abs(phi_back - p.phi))
    inv = np.maximum(inv, np.abs(geo.wrap_angle(th_back - p.theta)))
    checks.append(Check("normal-chart-inverse", "chart(embed(sigma, phi, theta)) = identity", a, inv, TOL_FRAME))

    qs = ShellPoint.scaling(rho, p.phi, p.theta)
    g, ginv = geo.metric_scaling(params, qs)
    metric = np.max(np.abs(np.einsum("...ij,...jk->...ik", g, ginv) - np.eye(3)), axis=(-2, -1))
    g_up = geo.g_rho_phi_upper(params, rho, p.phi)
    metric = np.maximum(metric, np.abs(g_up + g[..., 0, 1] / (a**2 * rho**2)))
    checks.append(Check("scaling-metric", "g g^-1 = I, g^{rho phi} = -g_{rho phi}/(a^2 rho^2)", a, metric, TOL_CLOSED))

    diag = geo.metric_normal(params, p.shell(Chart.NORMAL))
    L = geo.lam(params, p.phi)
    ind = np.stack([np.ones_like(L), L**2, (a * np.sin(p.phi)) ** 2], axis=-1)
    checks.append(Check("normal-metric-sigma0", "normal metric at sigma = 0 is (1, lambda^2, a^2 sin^2)", a, np.max(np.abs(diag - ind), axis=-1), TOL_CLOSED))

    cd = geo.curvatures(params, p)
    curv = np.maximum(np.abs(cd.gauss - cd.kappa1 * cd.kappa2), np.abs(cd.gauss - L**-4))
    curv = np.maximum(curv, np.abs(cd.kappa1 / cd.grad_rho_norm + a**2 / L**4))
    checks.append(Check("curvature-closed-forms", "K = k1 k2 = lambda^-4, k1/|grad rho| = -a^2/lambda^4", a, curv, TOL_CLOSED))
    sign = np.maximum(cd.kappa1, cd.kappa2)
    checks.append(Check("curvature-sign", "k1, k2 < 0 (outward normal)", a, -sign, 0.0, lower=0.0 + 1e-300))

    wein = bd.shell_shape_check(params, p, h, RESIDUAL_ORDER)
    checks.append(Check("weingarten", "-D_{E_i} N = k_i E_i (FD)", a, wein, tol))

    conn = np.max(np.abs(geo.connection_fd(params, p, h, RESIDUAL_ORDER) - geo.connection_on_E(params, p)), axis=(-3, -2, -1))
    checks.append(Check("connection", "Gamma^2_21 = -Gamma^1_22 = cot/lambda, others 0 (FD)", a, conn, tol))

    ps = _subset(p, slice(0, N_SLOPE_POINTS))
    checks.append(_slope_check("weingarten-slope", "order of the FD Weingarten check", a, SLOPE_STEPS, lambda hh: np.max(bd.shell_shape_check(params, ps, hh, SLOPE_ORDER))))
    checks.append(
        _slope_check(
            "connection-slope",
            "order of the FD connection check",
            a,
            SLOPE_STEPS,
            lambda hh: np.max(np.abs(geo.connection_fd(params, ps, hh, SLOPE_ORDER) - geo.connection_on_E(params, ps))),
        )
    )
    return checks


def suite_identities(cfg: RunConfig, params: EllipsoidParams, rng) -> list[Check]:
    a = params.a
    n = cfg.n_samples("identities")
    tol = cfg.tol("identities")
    h = cfg.h_first
    p = sample_points(params, rng, n)
    checks = []

    helpful = geo.helpful_suite(params, p, h, RESIDUAL_ORDER)
    tags = {
        "a2_grhophi_sq": "a^2 (g^{rho phi})^2 in powers of lambda",
        "e1_tilt": "E1(a g^{rho phi}) in powers of lambda",
        "e1_lambda": "E1(lambda) = a^2 g^{rho phi}/lambda^2",
        "e1_c313": "E1(c^3_13) in powers of lambda",
        "c313_sq": "(c^3_13)^2 in powers of lambda",
    }
    for k, name in enumerate(geo.HELPFUL_NAMES):
        checks.append(Check(f"helpful-{name}", tags[name], a, helpful[..., k], tol))

    closed, from_k, from_grad = geo.c313_routes(params, p, h, RESIDUAL_ORDER)
    trip = np.maximum(np.abs(closed - from_k), np.maximum(np.abs(closed - from_grad), np.abs(from_k - from_grad)))
    checks.append(Check("c313-three-routes", "c^3_13 = -E1(log K)/4 = E1|grad rho|/|grad rho|", a, trip, tol))
    if a == 1.0:
        checks.append(Check("c313-sphere-zero", "c^3_13 = 0 on the unit sphere", a, np.abs(closed), 1e-15))

    ps = _subset(p, slice(0, N_SLOPE_POINTS))
    if a != 1.0:
        checks.append(
            _slope_check(
                "helpful-slope",
                "order of the FD lambda identities",
                a,
                SLOPE_STEPS,
                lambda hh: np.max(geo.helpful_suite(params, ps, hh, SLOPE_ORDER)),
            )
        )

    rot = rotation(params)
    kill = np.max(np.abs(fc.deformation_surface(params, rot, p, h, RESIDUAL_ORDER)), axis=(-2, -1))
    kill = np.maximum(kill, np.abs(fc.divergence(params, rot, "E", p, h, RESIDUAL_ORDER)))
    checks.append(Check("killing-rotation", "Def(d_theta) = 0, div(d_theta) = 0", a, kill, tol))

    seeds = _field_seeds(rng, N_FIELDS)

    def lie_gap(u, pts):
        x = random_field(params, seeds[0] + 1)
        r1 = fc.lie_deriv_oneform(params, x, u, pts, h, RESIDUAL_ORDER)
        r2 = fc.lie_deriv_oneform_cartan(params, x, u, pts, h, RESIDUAL_ORDER)
        return np.max(np.abs(r1 - r2), axis=-1)

    checks.append(Check("lie-derivative-cartan", "L_X u_flat by components = iota_X d u_flat + d iota_X u_flat", a, _per_field(params, p, seeds, random_field, lie_gap), tol))

    def gauss_gap(u, pts):
        proj = fc.covar_surface_projected(params, rot, u, pts, h, RESIDUAL_ORDER)[..., :2]
        return np.max(np.abs(proj - fc.covar_surface(params, rot, u, pts, h, RESIDUAL_ORDER)), axis=-1)

    checks.append(Check("covariant-gauss", "(D_X Y)_tan = nabla_X Y", a, _per_field(params, p, seeds, random_field, gauss_gap), tol))

    def curl_gap(u, pts):
        v = extend_along_rays(params, u)
        _, res = fc.curl_and_musical(v, geo.embed(params, pts), h=h, order=RESIDUAL_ORDER)
        return np.maximum(res["cross_wedge"], res["curl_d"])

    checks.append(Check("curl-forms", "a# x b# = *(a ^ b), curl v = *d v_flat", a, _per_field(params, p, seeds, random_field, curl_gap), tol))

    def divfree_gap(u, pts):
        jet = ts.solve_bc_coeffs(params, ts.scenario("scaling-navier-divfree"), u, h)
        v = ts.build_field(params, jet)
        third = lambda y: np.sum(v(y) * geo.normal_field(params)(y), axis=-1)
        nv3 = fc.dir_deriv(params, third, fc.Direction.N, pts.shell(), h, RESIDUAL_ORDER, route="cartesian")
        rel = np.abs(nv3 - u(pts.phi, pts.theta)[..., 0] * geo.c313(params, pts.phi))
        div3 = np.abs(fc.divergence(params, v, "R3", pts, h, RESIDUAL_ORDER))
        return np.maximum(rel, div3)

    checks.append(Check("divfree-extension", "N(v^3) = c^3_13 v^1 and div v = 0 on E", a, _per_field(params, p, seeds, random_divfree, divfree_gap), tol))
    return checks


def suite_boundary(cfg: RunConfig, params: EllipsoidParams, rng) -> list[Check]:
    a = params.a
    n = cfg.n_samples("boundary")
    tol = cfg.tol("boundary")
    h = cfg.h_first
    p = sample_points(params, rng, n)
    # one seeded field per sample point, on a random shell of a random chart family
    seeds = _field_seeds(rng, n)
    chart_pick = rng.integers(0, 2, n)
    rho = rng.uniform(0.8, 1.2, n)
    sigma = rng.uniform(-0.5, 0.5, n) * geo.normal_sigma_bound(params)
    gamma = rng.uniform(0.0, 2.0, n)
    nav, hod, nh, fric, pen = (np.zeros(n) for _ in range(5))
    for i in range(n):
        chart = (Chart.SCALING, Chart.NORMAL)[chart_pick[i]]
        q = ShellPoint(chart, (rho, sigma)[chart_pick[i]][i : i + 1], p.phi[i : i + 1], p.theta[i : i + 1])
        v = extend_along_rays(params, random_field(params, seeds[i]), chart)
        r0 = bd.navier_residual(params, v, q, bd.BCKind(bd.BCTag.NAVIER), h, RESIDUAL_ORDER)
        rg = bd.navier_residual(params, v, q, bd.BCKind(bd.BCTag.NAVIER, gamma[i]), h, RESIDUAL_ORDER)
        nav[i] = rg.gap()[0]
        vt = geo.frame_at(params, q).components(v(geo.embed(params, q)))[..., :2]
        fric[i] = max(np.max(np.abs(rg.routes[k] - r0.routes[k] - gamma[i] * vt)) for k in bd.NAVIER_ROUTES)
        pen[i] = abs(r0.penetration[0])
        hod[i] = bd.hodge_residual(params, v, q, h, RESIDUAL_ORDER).gap()[0]
        nh[i] = bd.nh_relation_check(params, v, q, h, RESIDUAL_ORDER)[0]
    checks = [
        Check("navier-routes", "2(Def v N)_tan = [N,v]_tan = curl v x N + 2 s v (+ gamma v)", a, nav, tol),
        Check("hodge-routes", "curl v x N = iota_N d v_flat", a, hod, tol),
        Check("nh-relation", "((L_N v_flat)#)_tan = [N,v]_tan - 2 s v", a, nh, tol),
        Check("friction-linearity", "residual(gamma) - residual(0) = gamma v_tan", a, fric, TOL_CLOSED),
        Check("penetration", "g(v, N) = 0 for shell-tangent fields", a, pen, TOL_CLOSED),
    ]
    shells = ShellPoint.scaling(rho, p.phi, p.theta)
    checks.append(Check("shell-weingarten", "shape operator of rho = const is k_i/rho (FD)", a, bd.shell_shape_check(params, shells, h, RESIDUAL_ORDER), tol))

    k = N_SLOPE_POINTS
    ps = _subset(p, slice(0, k))
    v = extend_along_rays(params, random_field(params, seeds[0]))
    q = ShellPoint.scaling(rho[:k], ps.phi, ps.theta)
    checks.append(_slope_check("navier-routes-slope", "order of the Navier route gap", a, SLOPE_STEPS, lambda hh: np.max(bd.navier_residual(params, v, q, None, hh, SLOPE_ORDER).gap())))
    checks.append(_slope_check("hodge-routes-slope", "order of the Hodge route gap", a, SLOPE_STEPS, lambda hh: np.max(bd.hodge_residual(params, v, q, hh, SLOPE_ORDER).gap())))
    checks.append(_slope_check("nh-relation-slope", "order of the NH relation residual", a, SLOPE_STEPS, lambda hh: np.max(bd.nh_relation_check(params, v, q, hh, SLOPE_ORDER))))
    return checks


def suite_operators(cfg: RunConfig, params: EllipsoidParams, rng) -> list[Check]:
    a = params.a
    n = cfg.n_samples("operators")
    tol = cfg.tol("operators")
    h = cfg.h_first
    p = sample_points(params, rng, n)
    seeds = _field_seeds(rng, N_FIELDS)
    half = N_FIELDS // 2

    def make(pp, s):
        k = seeds.index(s)
        return random_field(pp, s) if k < half else random_divfree(pp, s)

    checks = []
    results = {}
    for kind in ops.OperatorKind:
        vals = []
        for k, idx in enumerate(np.array_split(np.arange(n), N_FIELDS)):
            u = make(params, seeds[k])
            vals.append(ops.apply(params, kind, u, _subset(p, idx), h))
        results[kind] = vals
        gap = np.concatenate([r.gap() for r in vals])
        checks.append(Check(f"routes-{kind.value}", f"{kind.value}: structural = coefficient assembly", a, gap, tol))

    def extra(u, pts):
        return ops._c2_u1_e1(params, u, pts)

    for hi, lo in ((ops.OperatorKind.O1, ops.OperatorKind.O3), (ops.OperatorKind.O2, ops.OperatorKind.O4)):
        diff = []
        for k, idx in enumerate(np.array_split(np.arange(n), N_FIELDS)):
            u = make(params, seeds[k])
            # cross-route: the displayed formula of one against the summary form of the other
            d = results[hi][k].values[ops.Route.STRUCTURAL] - results[lo][k].values[ops.Route.COEFFICIENT] - extra(u, _subset(p, idx))
            diff.append(np.max(np.abs(d), axis=-1))
        checks.append(Check(f"{hi.value}-minus-{lo.value}", f"{hi.value} - {lo.value} = 2 (c^3_13)^2 u^1 E1", a, np.concatenate(diff), TOL_FD1))

    r1, r2 = [], []
    for k, idx in enumerate(np.array_split(np.arange(n), N_FIELDS)):
        x1, x2 = ops.key1_check(params, make(params, seeds[k]), _subset(p, idx), h)
        r1.append(x1)
        r2.append(x2)
    checks.append(Check("key1-symmetry", "g(w, nabla_. (c E1))# = nabla_w (c E1)", a, np.concatenate(r1), TOL_FD1))
    checks.append(Check("key1-coefficients", "-nabla_w (c E1) = Ric w + zero-order coefficients", a, np.concatenate(r2), TOL_FD1))

    forms = []
    for bc in ("navier", "hodge"):
        forms.append(np.max(np.abs(ops.zero_order_coefficients(params, p.phi, bc) - ops.zero_order_coefficients(params, p.phi, bc, "lambda")), axis=-1))
    checks.append(Check("coefficient-forms", "curvature form = lambda form of the zero-order terms", a, np.maximum(*forms), TOL_CLOSED))

    rot = rotation(params)
    kill = np.zeros(n)
    for kind in (ops.OperatorKind.DEFLAP, ops.OperatorKind.O3):
        r = ops.apply(params, kind, rot, p, h)
        kill = np.maximum(kill, np.max(np.abs(np.stack([r.values[ops.Route.STRUCTURAL], r.values[ops.Route.COEFFICIENT]])), axis=(0, -1)))
    checks.append(Check("killing-annihilation", "deflap(d_theta) = o3(d_theta) = 0", a, kill, TOL_FD1))

    if a == 1.0:
        sph = []
        for k, idx in enumerate(np.array_split(np.arange(n), N_FIELDS)):
            u = make(params, seeds[k])
            pts = _subset(p, idx)
            dl = -2.0 * ops.div_deformation(params, u, pts, h)
            hg = ops.apply(params, ops.OperatorKind.HODGE, u, pts, h).value
            o = {kind: results[kind][k].value for kind in ops.CANDIDATES}
            d = np.maximum.reduce(
                [np.abs(o[ops.OperatorKind.O1] - dl), np.abs(o[ops.OperatorKind.O3] - dl), np.abs(o[ops.OperatorKind.O2] - hg), np.abs(o[ops.OperatorKind.O4] - hg)]
            )
            sph.append(np.max(d, axis=-1))
        checks.append(Check("sphere-degeneracy", "a = 1: o1 = o3 = -2 div Def, o2 = o4 = Hodge", a, np.concatenate(sph), TOL_CLOSED))

    nphi, nth = cfg.grid
    u, w = random_field(params, seeds[0]), random_divfree(params, seeds[1])
    coarse = ops.bochner_weak_form(params, u, w, max(nphi // 2, 2), max(nth // 2, 2), h)
    fine = ops.bochner_weak_form(params, u, w, nphi, nth, h)
    asym_c = abs(coarse[0] - coarse[2]) / abs(coarse[1])
    asym_f = abs(fine[0] - fine[2]) / abs(fine[1])
    checks.append(Check("bochner-weak-symmetry", "<B u, w> = <u, B w> under quadrature (relative)", a, np.array([asym_f]), TOL_FD2, note=f"half grid {asym_c:.3e}"))
    checks.append(Check("bochner-weak-refinement", "quadrature asymmetry decreases under refinement", a, np.array([asym_c - asym_f]), None, lower=0.0))

    # Gauss formula for the extrinsic Laplacian on seeded jets
    gseeds = _field_seeds(rng, N_FIELDS)
    gpts = _subset(p, slice(0, min(n, 100)))
    gauss = []
    for k, idx in enumerate(np.array_split(np.arange(gpts.phi.size), N_FIELDS)):
        if idx.size:
            v = ts.build_field(params, ts.random_jet(params, gseeds[k], (Chart.SCALING, Chart.NORMAL)[k % 2]))
            gauss.append(ts.gauss_formula_check(params, v, _subset(gpts, idx), h, cfg.h_second))
    checks.append(Check("gauss-formula", "(-Lap v)_tan = B u - K u + 2H [N,v]_tan - (D_N D_N v)_tan + nabla_{D_N N} u", a, np.concatenate(gauss), TOL_FD2))
    return checks


def _replay_fields(params, sc, seeds):
    if sc.needs_divfree:
        return [random_divfree(params, s) for s in seeds]
    return [random_field(params, s) for s in seeds]


def suite_limits(cfg: RunConfig, params: EllipsoidParams, rng) -> list[Check]:
    a = params.a
    n = cfg.n_samples("limits")
    tol = cfg.tol("limits")
    h, hc = cfg.h_first, cfg.h_second
    p = sample_points(params, rng, n)
    seeds = _field_seeds(rng, N_FIELDS)
    splits = [idx for idx in np.array_split(np.arange(n), N_FIELDS) if idx.size]
    checks = []
    oracles = {}
    for name, sc in ts.SCENARIOS.items():
        fields = _replay_fields(params, sc, seeds)
        res, bad = [], {1: [], 2: []}
        orc = []
        for k, idx in enumerate(splits):
            pts = _subset(p, idx)
            r = ts.replay(params, sc, fields[k], pts, h, hc)
            res.append(r.residual)
            orc.append(r.oracle)
            jet = ts.solve_bc_coeffs(params, sc, fields[k], h)
            for j in (1, 2):
                rc = ts.replay(params, sc, fields[k], pts, h, hc, jet=jet.corrupted(1, j), check=False)
                bad[j].append(rc.residual)
        oracles[name] = np.concatenate(orc)
        res = np.concatenate(res)
        checks.append(Check(f"replay-{name}", f"(-Lap v)_tan = {sc.target.value}(u0)", a, res, tol))
        for j in (1, 2):
            worst = float(np.max(np.concatenate(bad[j])))
            floor = max(10.0 * tol, 10.0 * float(np.max(res)))
            checks.append(Check(f"corrupt-A1^{j}-{name}", f"A1^{j} x 1.1 breaks the match", a, np.array([worst]), None, lower=floor))

        ps = _subset(p, slice(0, min(n, N_SLOPE_POINTS)))
        slope, errs = ts.replay_convergence(params, sc, fields[0], ps, CART_SLOPE_STEPS, h)
        checks.append(Check(f"replay-slope-{name}", "order of the 7-point oracle", a, slope=slope, window=REPLAY_SLOPE_WINDOW, steps=list(CART_SLOPE_STEPS), errors=errs))

        if sc.direction is Chart.SCALING:
            jet = ts.solve_bc_coeffs(params, sc, fields[0], h)
            au = ts.eps_relation_audit(params, sc, jet, ps, CART_SLOPE_STEPS, h)
            checks.append(Check(f"audit-solved-{name}", "outer residual of the solved jet is O(eps^2)", a, slope=au.slope, window=(1.8, np.inf), steps=au.eps, errors=au.residuals))
            checks.append(Check(f"audit-inner-{name}", "boundary relation on E for the solved jet", a, np.array([au.inner]), TOL_FD1))
            raw = ts.jet_from(Chart.SCALING, fields[0])
            au0 = ts.eps_relation_audit(params, sc, raw, ps, CART_SLOPE_STEPS, h)
            checks.append(Check(f"audit-unsolved-{name}", "outer residual of the unsolved jet is O(1)", a, slope=au0.slope, window=(-0.2, 0.2), steps=au0.eps, errors=au0.residuals))

    normal_rel = []
    u = random_field(params, seeds[0])
    for name in ("normal-navier", "normal-hodge"):
        jet = ts.solve_bc_coeffs(params, ts.scenario(name), u, h)
        cd = geo.curvatures(params, p)
        kap = np.stack([cd.kappa1, cd.kappa2], axis=-1)
        want = np.zeros_like(kap) if name == "normal-navier" else kap**2 * u(p.phi, p.theta)
        normal_rel.append(np.max(np.abs(jet.at(2, p.phi, p.theta)[..., :2] - want), axis=-1))
    checks.append(Check("normal-second-order", "Navier U2 = 0, Hodge U2^i = k_i^2 U0^i", a, np.maximum(*normal_rel), 1e-15))

    if a == 1.0:
        targets = []
        u = random_divfree(params, seeds[0])
        for kind in (ops.OperatorKind.O1, ops.OperatorKind.DEFLAP):
            targets.append(ops.apply(params, kind, u, p, h).value)
        checks.append(Check("sphere-targets", "a = 1: o1(u0) = deflap(u0)", a, np.max(np.abs(targets[0] - targets[1]), axis=-1), TOL_CLOSED))
        d = np.max(np.abs(oracles["scaling-navier-tangential"] - oracles["normal-navier"]), axis=-1)
        checks.append(Check("sphere-oracles", "a = 1: scaling and normal Navier oracles agree", a, d, TOL_FD1))
    return checks


SUITE_FUNCS: dict[str, Callable] = {
    "geometry": suite_geometry,
    "identities": suite_identities,
    "boundary": suite_boundary,
    "operators": suite_operators,
    "limits": suite_limits,
}


def run_suite(cfg: RunConfig, name: str) -> list[Check]:
    if name not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    out = []
    for i, a in enumerate(cfg.a_values):
        params = EllipsoidParams(float(a), cfg.delta_pole)
        out.extend(SUITE_FUNCS[name](cfg, params, _rng(cfg.seed, name, i)))
    return out
