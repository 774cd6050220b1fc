"""Riemannian geometry of unit level sets of homogeneous intersection forms.

The package computes, for a homogeneous degree-d form F on R^r with exact
rational coefficients:

- cone classification (positive cone, index cone) and the Hodge-type metric
  on the unit level set W1 = {F = 1}  (:mod:`kcurv.cone`),
- numeric sectional curvature and the full curvature tensor via an explicit
  radial-chart metric and finite differences, plus an independent
  exponential-surface cross-check  (:mod:`kcurv.curvature`),
- geodesics on W1 by chart-recentered Runge-Kutta integration
  (:mod:`kcurv.geodesic`),
- exact invariant theory of ternary cubics: base-point reduction, the
  Aronhold invariant S, a closed-form curvature, and degree-6 bound
  certificates  (:mod:`kcurv.aronhold`),
- intersection forms of complete intersections in products of projective
  spaces  (:mod:`kcurv.cicy`),
- a CLI for scans, witness searches, region grids, invariant reports, and
  geodesic traces  (:mod:`kcurv.cli`).
"""

from . import aronhold, cicy, cone, curvature, errors, fixtures, geodesic, symform
from .symform import Form, load_form, save_form

__version__ = "0.1.0"

__all__ = ["Form", "load_form", "save_form", "aronhold", "cicy", "cone",
           "curvature", "errors", "fixtures", "geodesic", "symform"]
