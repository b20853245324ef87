import numpy as np
import pytest

from shellvisc import fd


def cubic(x):
    return x**3 - 2 * x**2 + x


@pytest.mark.parametrize("order", [2, 4])
def test_first_derivative_exact_on_quadratics(order):
    x = np.linspace(-1, 1, 7)
    got = fd.derivative(lambda t: 3 * t**2 - t + 1, x, 0.1, order)
    assert np.allclose(got, 6 * x - 1, atol=1e-12)


def test_fourth_order_exact_on_quartics():
    x = np.linspace(-1, 1, 5)
    got = fd.derivative(lambda t: t**4, x, 0.1, 4)
    assert np.allclose(got, 4 * x**3, atol=1e-11)
    got2 = fd.second_derivative(lambda t: t**4 + t**3, x, 0.1, 4)
    assert np.allclose(got2, 12 * x**2 + 6 * x, atol=1e-9)


def test_second_difference_exact_on_constants():
    x = np.array([0.3, 1.7])
    assert np.all(fd.second_derivative(lambda t: np.full_like(t, 7.25), x, 1e-5, 4) == 0.0)


def test_per_point_steps():
    x = np.array([0.2, 0.5, 0.9])
    h = np.array([1e-3, 1e-2, 1e-4])
    assert np.allclose(fd.derivative(np.sin, x, h, 4), np.cos(x), atol=1e-9)


def test_unknown_order_rejected():
    with pytest.raises(ValueError):
        fd.derivative(np.sin, 0.0, 0.1, 3)


def test_directional_jacobian_laplacian_of_polynomial_field():
    def v(x):
        x = np.asarray(x)
        return np.stack([x[..., 0] ** 2, x[..., 0] * x[..., 1], x[..., 2] ** 2 * x[..., 0]], axis=-1)

    x = np.array([[0.3, -0.2, 0.7]])
    jac = fd.jacobian(v, x, 1e-3, 4)[0]
    px, py, pz = x[0]
    want = np.array([[2 * px, 0, 0], [py, px, 0], [pz**2, 0, 2 * pz * px]])
    assert np.allclose(jac, want, atol=1e-10)
    d = np.array([[0.0, 0.6, 0.8]])
    assert np.allclose(fd.directional(v, x, d, 1e-3, 4)[0], want @ d[0], atol=1e-10)
    assert np.allclose(fd.laplacian(v, x, 1e-3, 4)[0], [2.0, 0.0, 2 * px], atol=1e-7)


def test_sin_converges_at_second_order():
    steps = [1e-2, 5e-3, 2.5e-3]
    errs = [abs(fd.derivative(np.sin, 0.4, h, 2) - np.cos(0.4)) for h in steps]
    slope, _ = fd.loglog_slope(steps, errs)
    assert 1.95 < slope < 2.05


def test_loglog_slope_recovers_power_law():
    steps = np.array([1e-2, 1e-3, 1e-4])
    slope, intercept = fd.loglog_slope(steps, 3.0 * steps**2)
    assert slope == pytest.approx(2.0)
    assert intercept == pytest.approx(np.log(3.0))
