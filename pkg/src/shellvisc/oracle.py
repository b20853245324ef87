"""Independent extrinsic oracle for the thin-shell replay.

Only Cartesian evaluations of the ambient field and the frame at the base
point are used here; nothing in this module knows the intrinsic operators.
"""

from __future__ import annotations

import numpy as np

from . import fd
from .geometry import EllipsoidParams, SurfacePoint, check_pole, embed, frame_at

DEFAULT_H_CART = 1e-3


def extrinsic_laplacian_tangential(params: EllipsoidParams, v, p: SurfacePoint, h: float = DEFAULT_H_CART, order: int = 2) -> np.ndarray:
    """Tangential frame components of -Laplacian(v) at p, by the Cartesian stencil."""
    check_pole(params, p.phi)
    lap = fd.laplacian(v, embed(params, p), h, order)
    return -frame_at(params, p).components(lap)[..., :2]
