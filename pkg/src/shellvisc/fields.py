"""Field representations and the preset library.

Tangent fields on E are closures ``(phi, theta) -> (..., 2)`` returning frame
components (u1, u2) along E1, E2.  Ambient fields are closures on Cartesian
points ``x (..., 3) -> (..., 3)``.  Presets vanish to high order at the poles
so that they are smooth on E and finite differences near the excluded polar
band stay well conditioned.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import Chart, EllipsoidParams, SurfacePoint, chart_coords, frame_field, lam


@dataclass(frozen=True)
class ScalarFieldE:
    fn: Callable
    name: str = "scalar"

    def __call__(self, phi, theta):
        return self.fn(np.asarray(phi, float), np.asarray(theta, float))

    def periodicity_residual(self, phi, theta) -> float:
        return float(np.max(np.abs(self(phi, theta + 2 * np.pi) - self(phi, theta))))


@dataclass(frozen=True)
class TangentField:
    """Tangent field u = u1 E1 + u2 E2 on E, given by its frame components."""

    fn: Callable
    name: str = "field"

    def __call__(self, phi, theta) -> np.ndarray:
        return self.fn(np.asarray(phi, float), np.asarray(theta, float))

    def at(self, p: SurfacePoint) -> np.ndarray:
        return self(p.phi, p.theta)

    @property
    def u1(self) -> ScalarFieldE:
        return ScalarFieldE(lambda phi, theta: self(phi, theta)[..., 0], f"{self.name}.u1")

    @property
    def u2(self) -> ScalarFieldE:
        return ScalarFieldE(lambda phi, theta: self(phi, theta)[..., 1], f"{self.name}.u2")

    @classmethod
    def from_components(cls, u1: Callable, u2: Callable, name: str = "field") -> "TangentField":
        return cls(lambda phi, theta: np.stack(np.broadcast_arrays(u1(phi, theta), u2(phi, theta)), axis=-1), name)

    def __add__(self, other: "TangentField") -> "TangentField":
        return TangentField(lambda phi, theta: self(phi, theta) + other(phi, theta), f"({self.name}+{other.name})")

    def scaled(self, c: float) -> "TangentField":
        return TangentField(lambda phi, theta: c * self(phi, theta), f"{c:g}*{self.name}")


@dataclass(frozen=True)
class OneFormE:
    """1-form on E by its dual-frame components (w1, w2)."""

    fn: Callable
    name: str = "form"

    def __call__(self, phi, theta) -> np.ndarray:
        return self.fn(np.asarray(phi, float), np.asarray(theta, float))


def flat(u: TangentField) -> OneFormE:
    # the frame is orthonormal, so lowering an index leaves components unchanged
    return OneFormE(u.fn, f"{u.name}_flat")


def sharp(w: OneFormE) -> TangentField:
    return TangentField(w.fn, f"{w.name}_sharp")


@dataclass(frozen=True)
class AmbientField:
    """Vector field on a band around E as a Cartesian closure; ``chart`` names the family it lives in."""

    fn: Callable
    chart: Chart = Chart.SCALING
    name: str = "ambient"

    def __call__(self, x) -> np.ndarray:
        return self.fn(np.asarray(x, float))


def zero_tangent() -> TangentField:
    return TangentField(lambda phi, theta: np.zeros(np.broadcast(phi, theta).shape + (2,)), "zero")


def constant_field(c) -> AmbientField:
    c = np.asarray(c, float)
    return AmbientField(lambda x: np.broadcast_to(c, x.shape).copy(), name="constant")


def position_field() -> AmbientField:
    return AmbientField(lambda x: np.array(x, float), name="position")


def planar_rotation() -> AmbientField:
    """(-y, x, 0)."""
    return AmbientField(lambda x: np.stack([-x[..., 1], x[..., 0], np.zeros_like(x[..., 0])], axis=-1), name="xy-rotation")


def extend_along_rays(params: EllipsoidParams, u: TangentField, chart: Chart = Chart.SCALING) -> AmbientField:
    """Ambient field with the frame components of ``u`` held constant along radial lines."""

    def fn(x):
        _, phi, theta = chart_coords(params, x, chart)
        fr = frame_field(params, x, chart)
        return fr.vector(u(phi, theta))

    return AmbientField(fn, Chart(chart), f"{u.name}_ext")


# ---------------------------------------------------------------------------
# presets


def rotation(params: EllipsoidParams) -> TangentField:
    """The Killing field d_theta = a sin(phi) E2."""
    a = params.a
    return TangentField(lambda phi, theta: np.stack(np.broadcast_arrays(0.0 * phi * theta, a * np.sin(phi) + 0.0 * theta), axis=-1), "rotation")


def meridian(params: EllipsoidParams) -> TangentField:
    """f(phi) E1 with f = sin^3(phi) cos(phi)."""
    return TangentField.from_components(
        lambda phi, theta: np.sin(phi) ** 3 * np.cos(phi) + 0.0 * theta,
        lambda phi, theta: 0.0 * phi * theta,
        "meridian",
    )


def mixed(params: EllipsoidParams, m: int) -> TangentField:
    """g(phi) cos(m theta) E1 + h(phi) sin(m theta) E2, g = sin^(m+3), h = sin^(m+3) cos."""
    k = m + 3
    return TangentField.from_components(
        lambda phi, theta: np.sin(phi) ** k * np.cos(m * theta),
        lambda phi, theta: np.sin(phi) ** k * np.cos(phi) * np.sin(m * theta),
        f"mixed:m={m}",
    )


def stream(params: EllipsoidParams, psi: Callable, dpsi_dphi: Callable, dpsi_dtheta: Callable, name: str = "stream") -> TangentField:
    """Rotated surface gradient N x grad(psi) = -E2(psi) E1 + E1(psi) E2 (divergence free)."""
    a = params.a

    def fn(phi, theta):
        u1 = -dpsi_dtheta(phi, theta) / (a * np.sin(phi))
        u2 = dpsi_dphi(phi, theta) / lam(params, phi)
        return np.stack(np.broadcast_arrays(u1, u2), axis=-1)

    return TangentField(fn, name)


def _mode_profile(k: int, alpha: float, beta: float):
    """P(phi) = sin^k (alpha + beta cos) and its phi derivative."""

    def p(phi):
        s = np.sin(phi)
        return s**k * (alpha + beta * np.cos(phi))

    def dp(phi):
        s, c = np.sin(phi), np.cos(phi)
        return k * s ** (k - 1) * c * (alpha + beta * c) - beta * s ** (k + 1)

    return p, dp


def stream_mode(params: EllipsoidParams, m: int) -> TangentField:
    """Divergence-free field from psi = sin^(m+4)(phi) cos(m theta).

    The power keeps the parity of m, which makes psi smooth across the poles.
    """
    p, dp = _mode_profile(m + 4, 1.0, 0.0)
    return stream(
        params,
        lambda phi, theta: p(phi) * np.cos(m * theta),
        lambda phi, theta: dp(phi) * np.cos(m * theta),
        lambda phi, theta: -m * p(phi) * np.sin(m * theta),
        f"stream:m={m}",
    )


MAX_MODE = 3


def random_field(params: EllipsoidParams, seed: int) -> TangentField:
    """Seeded combination of azimuthal modes m = 0..3 in both components."""
    rng = np.random.Generator(np.random.PCG64(seed))
    coef = rng.standard_normal((MAX_MODE + 1, 4)) / (1.0 + np.arange(MAX_MODE + 1))[:, None]
    shift = rng.uniform(-np.pi, np.pi, (MAX_MODE + 1, 2))

    def fn(phi, theta):
        s, c = np.sin(phi), np.cos(phi)
        u1 = 0.0
        u2 = 0.0
        for m in range(MAX_MODE + 1):
            sk = s ** (m + 3)
            u1 = u1 + sk * (coef[m, 0] + coef[m, 1] * c) * np.cos(m * theta + shift[m, 0])
            u2 = u2 + sk * (coef[m, 2] + coef[m, 3] * c) * np.cos(m * theta + shift[m, 1])
        return np.stack(np.broadcast_arrays(u1, u2), axis=-1)

    return TangentField(fn, f"random:seed={seed}")


def random_divfree(params: EllipsoidParams, seed: int) -> TangentField:
    """Seeded divergence-free field: a stream-function combination plus a multiple of the rotation."""
    rng = np.random.Generator(np.random.PCG64(seed))
    coef = rng.standard_normal((MAX_MODE + 1, 2)) / (1.0 + np.arange(MAX_MODE + 1))[:, None]
    shift = rng.uniform(-np.pi, np.pi, MAX_MODE + 1)
    spin = float(rng.standard_normal())
    profiles = [_mode_profile(m + 4, coef[m, 0], coef[m, 1]) for m in range(MAX_MODE + 1)]

    def psi_phi(phi, theta):
        return sum(dp(phi) * np.cos(m * theta + shift[m]) for m, (_, dp) in enumerate(profiles))

    def psi_theta(phi, theta):
        return sum(-m * p(phi) * np.sin(m * theta + shift[m]) for m, (p, _) in enumerate(profiles))

    base = stream(params, None, psi_phi, psi_theta)
    rot = rotation(params)
    return TangentField(lambda phi, theta: base(phi, theta) + spin * rot(phi, theta), f"random-divfree:seed={seed}")


_PRESET_RE = re.compile(r"^(?P<kind>[a-z-]+)(?::(?P<key>[a-z]+)=(?P<val>\d+))?$")
PRESET_NAMES = ("rotation", "meridian", "mixed:m=<int>", "stream:m=<int>", "random:seed=<u64>", "random-divfree:seed=<u64>")
DIVFREE_PRESETS = ("rotation", "stream", "random-divfree")


def preset(name: str, params: EllipsoidParams) -> TangentField:
    """Look up a preset by its CLI identifier, e.g. ``"mixed:m=2"``."""
    match = _PRESET_RE.match(name.strip())
    if not match:
        raise ValueError(f"unknown field preset {name!r}; expected one of {', '.join(PRESET_NAMES)}")
    kind, key, val = match.group("kind"), match.group("key"), match.group("val")
    if kind in ("rotation", "meridian") and key is None:
        return rotation(params) if kind == "rotation" else meridian(params)
    if kind in ("mixed", "stream") and key == "m":
        m = int(val)
        return mixed(params, m) if kind == "mixed" else stream_mode(params, m)
    if kind in ("random", "random-divfree") and key == "seed":
        seed = int(val)
        if seed >= 2**64:
            raise ValueError("seed must fit in 64 bits")
        return random_field(params, seed) if kind == "random" else random_divfree(params, seed)
    raise ValueError(f"unknown field preset {name!r}; expected one of {', '.join(PRESET_NAMES)}")
