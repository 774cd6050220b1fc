"""Geodesic flow on the unit level set W1 = {F = 1} under the Hodge metric.

For a degree-d form the geodesic equation on W1, written in ambient
coordinates, reads

    x'' = tang(x, v) / (2 d (d-1)) + (d - 1) G(v, v) x,

where tang(x, v) is the tangent vector representing the covector
u -> sum_ijk d^3F_ijk(x) v_i v_j u_k with respect to the Hodge metric
G(a, b) = -a^T Hess F(x) b / (d (d-1)).  The exact flow preserves both the
level F = 1 and tangency grad F . v = 0: differentiating grad F(x).v along
the flow gives v^T Hess v + grad F . x'' = -d(d-1) G(v,v) + d(d-1) G(v,v)
= 0.  Numerically the flow is integrated with classical fixed-step RK4;
every stage re-centers its input onto the level set (scale x to F = 1,
project v radially) so the evaluated field is the on-manifold one, and
after each step the state is renormalized, with the pre-renormalization
level drift recorded as an honesty check — it stays near the RK4 local
truncation error rather than accumulating.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import INDEX_CONE, classify, metric_gram, tangent_basis
from .errors import (
    LeftIndexCone,
    NearDegenerate,
    NonpositiveValue,
    NotInIndexCone,
    StepRejected,
)
from .symform import Form

__all__ = ["Trajectory", "geodesic_integrate", "exp_map"]

DEFAULT_STEPS_PER_UNIT_TIME = 1000
SPEED_DRIFT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled geodesic: node times, points on W1, tangent velocities,
    Hodge speeds, and the per-step level drift |F(x) - 1| measured before
    renormalization (index 0 is trivially zero)."""

    times: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    speeds: np.ndarray
    level_drifts: np.ndarray

    @property
    def endpoint(self):
        return self.points[-1]


def _recenter(F: Form, x, v):
    """Project an ambient state onto (W1, tangent): scale x, strip the
    radial component of v.  Raises LeftIndexCone when F(x) <= 0."""
    f = F.eval(x)
    if f <= 0:
        raise LeftIndexCone(f"form value {f:g} is nonpositive")
    xh = x * f ** (-1.0 / F.degree)
    g = F.gradient(xh)
    vh = v - xh * ((g @ v) / (g @ xh))
    return xh, vh, g


def _accel(F: Form, x, v):
    """Geodesic acceleration, evaluated after re-centering the state."""
    d = F.degree
    xh, vh, g = _recenter(F, x, v)
    H = np.asarray(F.hessian_matrix(xh))
    scale = d * (d - 1)
    Gvv = -(vh @ H @ vh) / scale
    if d == 2:
        return Gvv * xh
    B = tangent_basis(F, xh)
    gram = -(B @ H @ B.T) / scale
    alpha = F.third_contract(xh, vh, vh)
    c = np.linalg.solve(gram, B @ alpha)
    tang = c @ B
    return tang / (2 * scale) + (d - 1) * Gvv * xh


def geodesic_integrate(F: Form, x0, v0, T: float, steps: int | None = None) -> Trajectory:
    """Integrate the geodesic through x0 with initial velocity v0 for time T.

    x0 is normalized onto W1 and v0 projected onto its tangent space first
    (a documented convenience; pass exact data to skip any adjustment).
    Fixed-step RK4 with ``steps`` steps, defaulting to 1000 per unit time.
    Raises LeftIndexCone if the trajectory exits the index cone and
    StepRejected if the conserved Hodge speed drifts beyond tolerance.
    """
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    try:
        x, v, _ = _recenter(F, x0, v0)
    except LeftIndexCone as exc:
        raise NonpositiveValue(str(exc)) from exc
    cp = classify(F, x)
    if cp.classification != INDEX_CONE:
        raise NotInIndexCone(f"classification is {cp.classification}")

    if steps is None:
        steps = max(1, int(round(DEFAULT_STEPS_PER_UNIT_TIME * abs(T))))
    if steps < 1:
        raise ValueError("steps must be a positive integer")
    h = T / steps
    d = F.degree
    scale = d * (d - 1)

    def speed2(xx, vv):
        H = np.asarray(F.hessian_matrix(xx))
        return -(vv @ H @ vv) / scale

    G0 = speed2(x, v)
    times = np.empty(steps + 1)
    points = np.empty((steps + 1, F.dim))
    velocities = np.empty_like(points)
    speeds = np.empty(steps + 1)
    drifts = np.zeros(steps + 1)
    times[0], points[0], velocities[0] = 0.0, x, v
    speeds[0] = np.sqrt(max(G0, 0.0))

    for n in range(steps):
        k1x, k1v = v, _accel(F, x, v)
        k2x, k2v = v + 0.5 * h * k1v, _accel(F, x + 0.5 * h * k1x, v + 0.5 * h * k1v)
        k3x, k3v = v + 0.5 * h * k2v, _accel(F, x + 0.5 * h * k2x, v + 0.5 * h * k2v)
        k4x, k4v = v + h * k3v, _accel(F, x + h * k3x, v + h * k3v)
        x_new = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        v_new = v + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)

        f_pre = F.eval(x_new)
        if f_pre <= 0:
            raise LeftIndexCone(f"form value {f_pre:g} after step {n + 1}")
        drift = abs(f_pre - 1.0)
        x, v, _ = _recenter(F, x_new, v_new)
        try:
            cp = classify(F, x)
        except NearDegenerate as exc:
            raise LeftIndexCone(f"near-degenerate Hessian after step {n + 1}") from exc
        if cp.classification != INDEX_CONE:
            raise LeftIndexCone(
                f"classification {cp.classification} after step {n + 1}")
        G_now = speed2(x, v)
        if abs(G_now - G0) > SPEED_DRIFT_TOL * max(1.0, abs(G0)):
            raise StepRejected(
                f"speed^2 drifted by {abs(G_now - G0):g} at step {n + 1}")
        times[n + 1] = (n + 1) * h
        points[n + 1] = x
        velocities[n + 1] = v
        speeds[n + 1] = np.sqrt(max(G_now, 0.0))
        drifts[n + 1] = drift

    return Trajectory(times=times, points=points, velocities=velocities,
                      speeds=speeds, level_drifts=drifts)


def exp_map(F: Form, x0, v, steps: int | None = None) -> np.ndarray:
    """Riemannian exponential: endpoint of the unit-time geodesic from x0
    with initial velocity v."""
    vn = np.asarray(v, dtype=float)
    if not np.any(vn):
        xh, _, _ = _recenter(F, np.asarray(x0, dtype=float), vn)
        return xh
    if steps is None:
        speed = float(np.linalg.norm(vn))
        steps = max(1, int(round(DEFAULT_STEPS_PER_UNIT_TIME * max(speed, 1e-3))))
    return geodesic_integrate(F, x0, v, 1.0, steps=steps).endpoint
