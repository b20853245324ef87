"""Centered finite-difference stencils.

Every function here takes a vectorized callable and evaluates it on shifted
copies of the input array, so a whole batch of sample points is handled by a
handful of calls.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

# First derivative: f'(x) ~ sum_k w_k (f(x + k h) - f(x - k h)) / h
_FIRST = {
    2: ((1, 0.5),),
    4: ((1, 2.0 / 3.0), (2, -1.0 / 12.0)),
}
# Second derivative: f''(x) ~ sum_k w_k (f(x + k h) - 2 f(x) + f(x - k h)) / h^2.
# Summing differences from the centre (rather than c0 f(x) + ...) keeps the
# stencil exact on locally constant data, which matters once 1/h^2 is further
# scaled by 1/sin(phi)^2 next to the poles.
_SECOND = {
    2: ((1, 1.0),),
    4: ((1, 4.0 / 3.0), (2, -1.0 / 12.0)),
}


def _check_order(order: int) -> None:
    if order not in _FIRST:
        raise ValueError(f"unsupported stencil order {order}; use 2 or 4")


def _trail(h, total):
    # a per-point step array broadcasts over trailing component axes of the values
    h = np.asarray(h, dtype=float)
    return h.reshape(h.shape + (1,) * (np.ndim(total) - h.ndim))


def derivative(f: Callable, x, h, order: int = 2):
    """Centered first derivative of a function of one (array) variable.

    ``h`` may be a scalar or an array of per-point steps shaped like ``x``.
    """
    _check_order(order)
    x = np.asarray(x, dtype=float)
    total = 0.0
    for k, w in _FIRST[order]:
        total = total + w * (f(x + k * h) - f(x - k * h))
    return total / _trail(h, total)


def second_derivative(f: Callable, x, h, order: int = 2):
    _check_order(order)
    x = np.asarray(x, dtype=float)
    f0 = f(x)
    total = 0.0
    for k, w in _SECOND[order]:
        total = total + w * ((f(x + k * h) - f0) + (f(x - k * h) - f0))
    return total / _trail(h, total) ** 2


def directional(v: Callable, x, d, h: float, order: int = 2):
    """Derivative of a Cartesian field ``v`` at ``x`` (..., 3) along ``d`` (..., 3).

    ``d`` is not normalized: the result is the directional derivative along
    the vector as given, so linearity in ``d`` holds.
    """
    _check_order(order)
    x = np.asarray(x, dtype=float)
    d = np.broadcast_to(np.asarray(d, dtype=float), x.shape)
    total = 0.0
    for k, w in _FIRST[order]:
        total = total + w * (v(x + k * h * d) - v(x - k * h * d))
    return total / h


def jacobian(v: Callable, x, h: float, order: int = 2):
    """Jacobian ``J[..., i, j] = d v_i / d x_j`` of a Cartesian field."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(3):
        e = np.zeros(3)
        e[j] = 1.0
        cols.append(directional(v, x, e, h, order))
    return np.stack(cols, axis=-1)


def laplacian(v: Callable, x, h: float, order: int = 2):
    """Componentwise Cartesian Laplacian (7-point stencil for order 2)."""
    _check_order(order)
    x = np.asarray(x, dtype=float)
    v0 = v(x)
    total = 0.0
    for j in range(3):
        e = np.zeros(3)
        e[j] = 1.0
        for k, w in _SECOND[order]:
            total = total + w * ((v(x + k * h * e) - v0) + (v(x - k * h * e) - v0))
    return total / (h * h)


def loglog_slope(steps: Sequence[float], errors: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope and intercept of log(error) against log(step)."""
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if steps.size < 3:
        raise ValueError("a convergence fit needs at least 3 steps")
    if np.any(steps <= 0):
        raise ValueError("steps must be positive")
    tiny = np.finfo(float).tiny
    slope, intercept = np.polyfit(np.log(steps), np.log(np.maximum(errors, tiny)), 1)
    return float(slope), float(intercept)
