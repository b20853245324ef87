import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shellvisc import geometry as geo
from shellvisc.geometry import Chart, EllipsoidParams, ShellPoint, SurfacePoint

from .conftest import sample

A2 = EllipsoidParams(2.0)
Q = math.pi / 4

a_st = st.floats(0.3, 6.0)
phi_st = st.floats(0.05, math.pi - 0.05)
theta_st = st.floats(-math.pi, math.pi)


def cartesian_frame(a, phi, theta):
    """Frame from the parametrization (a sin phi cos theta, a sin phi sin theta, cos phi), by hand."""
    s, c = math.sin(phi), math.cos(phi)
    x = np.array([a * s * math.cos(theta), a * s * math.sin(theta), c])
    dphi = np.array([a * c * math.cos(theta), a * c * math.sin(theta), -s])
    dth = np.array([-a * s * math.sin(theta), a * s * math.cos(theta), 0.0])
    grad = np.array([x[0], x[1], a * a * x[2]])
    return x, dphi / np.linalg.norm(dphi), dth / np.linalg.norm(dth), grad / np.linalg.norm(grad), np.linalg.norm(dphi)


# ---------------------------------------------------------------------------
# closed forms at fixed points (hand-substituted values)


@pytest.mark.parametrize("a,phi,want", [(1.0, 0.7, 1.0), (2.0, math.pi / 2, 1.0), (2.0, Q, math.sqrt(2.5))])
def test_lambda_values(a, phi, want):
    assert geo.lam(EllipsoidParams(a), phi) == pytest.approx(want, abs=1e-15)


def test_lambda_is_meridian_speed():
    for phi in (0.3, Q, 2.0):
        *_, speed = cartesian_frame(2.0, phi, 0.1)
        assert geo.lam(A2, phi) == pytest.approx(speed, rel=1e-14)


def test_curvature_values():
    cd = geo.curvatures(EllipsoidParams(1.0), 0.9)
    assert (cd.kappa1, cd.kappa2, cd.gauss) == pytest.approx((-1.0, -1.0, 1.0), abs=1e-15)
    cd = geo.curvatures(A2, math.pi / 2)
    assert (cd.kappa1, cd.kappa2, cd.gauss) == pytest.approx((-2.0, -0.5, 1.0), abs=1e-15)
    cd = geo.curvatures(A2, Q)
    assert cd.gauss == pytest.approx(0.16, abs=1e-15)
    assert cd.kappa1 == pytest.approx(-2.0 / 2.5**1.5, rel=1e-14)
    assert cd.kappa2 == pytest.approx(-1.0 / (2.0 * math.sqrt(2.5)), rel=1e-14)
    assert cd.sqrt_gauss == pytest.approx(0.4, abs=1e-15)


def test_c313_values():
    assert geo.c313(A2, Q) == pytest.approx(4 * -0.375 / 2.5**1.5, rel=1e-14)
    assert geo.c313(A2, Q) == pytest.approx(-0.37947, abs=1e-5)
    assert geo.c313(A2, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert np.all(geo.c313(EllipsoidParams(1.0), np.linspace(0.1, 3.0, 9)) == 0.0)


def test_c313_three_routes_agree():
    p = SurfacePoint([Q, 1.1, 2.3], [0.0, 1.0, -2.0])
    closed, log_k, grad_rho = geo.c313_routes(A2, p, 1e-4, 4)
    assert np.max(np.abs(log_k - closed)) < 1e-8
    assert np.max(np.abs(grad_rho - closed)) < 1e-8


def test_helpful_values():
    forms = geo.helpful_closed_forms(A2, Q)
    assert forms["e1_c313"] == pytest.approx(-10 / 6.25 + 0.4 + 12 / 15.625, rel=1e-14)
    assert forms["e1_c313"] == pytest.approx(-0.432, abs=1e-12)
    assert forms["e1_lambda"] == pytest.approx(-0.6, abs=1e-12)
    res = geo.helpful_suite(A2, SurfacePoint(Q, 0.0), 1e-4, 2)
    assert np.max(res) < 1e-6
    res = geo.helpful_suite(EllipsoidParams(0.5), SurfacePoint(1.0, 0.3), 1e-4, 2)
    assert np.max(res) < 1e-6
    res = geo.helpful_suite(EllipsoidParams(1.0), SurfacePoint([0.3, 2.0], 0.0), 1e-4, 2)
    assert np.max(res) < 1e-12


def test_metric_scaling():
    g, _ = geo.metric_scaling(EllipsoidParams(1.0), ShellPoint.scaling(1.0, 0.8, 0.2))
    assert np.allclose(g, np.diag([1.0, 1.0, math.sin(0.8) ** 2]), atol=1e-15)
    g, _ = geo.metric_scaling(A2, ShellPoint.scaling(1.0, math.pi / 2, 0.0))
    assert g[0, 1] == pytest.approx(0.0, abs=1e-15)
    g, gi = geo.metric_scaling(A2, ShellPoint.scaling(1.1, Q, 0.0))
    assert np.max(np.abs(g @ gi - np.eye(3))) < 1e-12


def test_metric_normal():
    phi = 0.9
    got = geo.metric_normal(EllipsoidParams(1.0), ShellPoint.normal(0.1, phi, 0.0))
    assert np.allclose(got, [1.0, 1.1**2, 1.1**2 * math.sin(phi) ** 2], atol=1e-14)
    got = geo.metric_normal(A2, ShellPoint.normal(0.0, Q, 0.0))
    assert np.allclose(got, [1.0, 2.5, 2.0], atol=1e-14)
    sig = 0.07
    cd = geo.curvatures(A2, Q)
    got = geo.metric_normal(A2, ShellPoint.normal(sig, Q, 0.0))
    want = [((1 - sig * cd.kappa1) * math.sqrt(2.5)) ** 2, ((1 - sig * cd.kappa2) * 2 * math.sin(Q)) ** 2]
    assert np.allclose(got[1:], want, rtol=1e-14)


def test_frame_against_parametrization():
    for phi, theta in ((Q, 0.0), (1.2, -2.0), (2.7, 2.9)):
        _, e1, e2, n, _ = cartesian_frame(2.0, phi, theta)
        fr = geo.frame_at(A2, SurfacePoint(phi, theta))
        assert np.allclose(fr.matrix, [e1, e2, n], atol=1e-14)


def test_sphere_equator_normal():
    fr = geo.frame_at(EllipsoidParams(1.0), ShellPoint.scaling(1.0, math.pi / 2, 0.0))
    assert np.allclose(fr.n, [1.0, 0.0, 0.0], atol=1e-15)


def test_rotation_components():
    # d_theta = (-y, x, 0) has frame components (0, a sin phi, 0)
    fr = geo.frame_at(A2, SurfacePoint(Q, 0.3))
    x = geo.embed(A2, SurfacePoint(Q, 0.3))
    comps = fr.components([-x[1], x[0], 0.0])
    assert np.allclose(comps, [0.0, math.sqrt(2.0), 0.0], atol=1e-14)


def test_chart_round_trips():
    p = sample(A2, 30, seed=3)
    rho = np.linspace(0.8, 1.2, 30)
    x = geo.embed(A2, ShellPoint.scaling(rho, p.phi, p.theta))
    r2, f2, t2 = geo.scaling_coords(A2, x)
    assert np.allclose(r2, rho, atol=1e-13) and np.allclose(f2, p.phi, atol=1e-12) and np.allclose(t2, p.theta, atol=1e-12)
    sig = np.linspace(-0.1, 0.1, 30)
    x = geo.embed(A2, ShellPoint.normal(sig, p.phi, p.theta))
    s2, f2, t2 = geo.normal_coords(A2, x)
    assert np.allclose(s2, sig, atol=1e-12) and np.allclose(f2, p.phi, atol=1e-10)


def test_frames_coincide_across_charts():
    p = sample(A2, 20, seed=4)
    fs = geo.frame_at(A2, ShellPoint.scaling(1.1, p.phi, p.theta))
    fn = geo.frame_at(A2, ShellPoint.normal(0.05, p.phi, p.theta))
    assert np.max(np.abs(fs.matrix - fn.matrix)) < 1e-14


def test_pole_and_chart_errors():
    with pytest.raises(geo.PoleExclusionError):
        geo.frame_at(A2, SurfacePoint(1e-3, 0.0))
    with pytest.raises(geo.PoleExclusionError):
        geo.helpful_suite(A2, SurfacePoint(math.pi - 1e-3, 0.0))
    with pytest.raises(geo.ChartValidityError):
        geo.check_chart(A2, ShellPoint.normal(10.0, Q, 0.0))
    with pytest.raises(geo.ChartValidityError):
        geo.metric_normal(A2, ShellPoint.scaling(1.0, Q, 0.0))
    with pytest.raises(ValueError):
        EllipsoidParams(-1.0)


def test_shape_operator():
    sph = EllipsoidParams(1.0)
    p = SurfacePoint(1.0, 0.2)
    assert np.allclose(geo.shape_operator(sph, p, np.array([1.0, 0.0]), 1e-4, 4), [-1.0, 0.0], atol=1e-8)
    cd = geo.curvatures(A2, Q)
    got = geo.shape_operator(A2, SurfacePoint(Q, 0.0), np.array([1.0, 1.0]), 1e-4, 4)
    assert np.allclose(got, [cd.kappa1, cd.kappa2], atol=1e-6)


def test_connection():
    tab = geo.connection_on_E(A2, SurfacePoint(Q, 0.0))
    assert np.max(np.abs(geo.connection_on_E(A2, SurfacePoint(math.pi / 2, 0.0)))) < 1e-15
    fdtab = geo.connection_fd(A2, SurfacePoint(Q, 0.0), 1e-4, 4)
    assert np.allclose(fdtab, tab, atol=1e-6)
    # nabla_{E2} E1 = (cot phi / lambda) E2 with cot(pi/4) = 1
    assert np.isclose(np.max(np.abs(tab)), 1 / math.sqrt(2.5), atol=1e-14)


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=60, deadline=None)
@given(a=a_st, phi=phi_st, theta=theta_st, r=st.floats(0.7, 1.3))
def test_frame_orthonormal_and_oriented(a, phi, theta, r):
    fr = geo.frame_at(EllipsoidParams(a), ShellPoint.scaling(r, phi, theta))
    assert fr.gram_residual() < 1e-12
    assert fr.orientation() == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(a=a_st, phi=phi_st)
def test_gauss_curvature_is_product_and_lambda_power(a, phi):
    params = EllipsoidParams(a)
    cd = geo.curvatures(params, phi)
    L = geo.lam(params, phi)
    assert cd.gauss == pytest.approx(cd.kappa1 * cd.kappa2, rel=1e-12)
    assert cd.gauss == pytest.approx(L**-4, rel=1e-12)
    assert cd.kappa1 < 0 and cd.kappa2 < 0


@settings(max_examples=60, deadline=None)
@given(a=a_st, phi=phi_st)
def test_algebraic_helpful_identities(a, phi):
    params = EllipsoidParams(a)
    res = geo.helpful_suite(params, SurfacePoint(phi, 0.0), 1e-4, 4)
    idx = [geo.HELPFUL_NAMES.index("a2_grhophi_sq"), geo.HELPFUL_NAMES.index("c313_sq")]
    assert np.max(res[idx]) < 1e-12


@settings(max_examples=40, deadline=None)
@given(a=a_st, phi=phi_st, theta=theta_st)
def test_normal_is_scaled_gradient(a, phi, theta):
    _, e1, e2, n, _ = cartesian_frame(a, phi, theta)
    fr = geo.frame_at(EllipsoidParams(a), SurfacePoint(phi, theta))
    assert np.allclose(fr.n, n, atol=1e-13)
