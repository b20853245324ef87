"""Viscosity operators on an ellipsoid of revolution and their thin-shell limits.

Modules: ``geometry`` (charts, frames, curvature), ``fields`` (field types and
presets), ``fieldcalc`` (vector calculus on E and in the band), ``operators``
(the seven surface operators, two assembly routes each), ``boundary``
(Navier/Hodge residuals), ``thinshell`` (jets, boundary-relation solve,
replay against the Cartesian oracle), ``suites`` and ``cli``.
"""

__version__ = "0.1.0"
