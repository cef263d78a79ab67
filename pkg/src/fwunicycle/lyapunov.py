"""Lyapunov certificates and the collision bound, evaluated numerically.

``v1`` is the weighted bearing-mismatch energy ``sum_i w_i e_i^T (g_i - g_i*)``
which vanishes only at the Fermat-Weber point. ``v2`` adds the compensator
error and a heading-alignment term for beacons moving at constant velocity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .controllers import CompensatorState, MovingGains, SaturationLimits, saturation_factors
from .errors import CoincidentPoints, NotPositiveDefinite, ZeroTargetVelocity
from .geometry import (
    DELTA_SINGULAR,
    BeaconSet,
    as_vec2,
    bearing_sum_xy,
    bearings,
    projection,
    require_unit,
    sym2_eigvalsh,
)

PD_TOL = 1e-12


@dataclass(frozen=True)
class CertificateSample:
    t: float
    V: float
    V_dot_analytic: float
    V_dot_numeric: float
    min_beacon_distance: float
    tracking_error: float


@dataclass(frozen=True)
class CollisionCertificate:
    lambda_min: float
    sigma: float
    xi: float
    min_dstar: float
    max_dstar: float
    guaranteed: bool


def v1_xy(x: float, y: float, fw_x: float, fw_y: float, beacons: BeaconSet, t: float = 0.0) -> float:
    """Float kernel of :func:`v1`, written as ``sum_i w_i (|e_i| - e_i . g_i*)``."""
    vx, vy = beacons._v
    total = 0.0
    for bx, by, w in zip(beacons._xs, beacons._ys, beacons._ws):
        if t:
            bx += vx * t
            by += vy * t
        ex, ey = bx - x, by - y
        d = math.hypot(ex, ey)
        sx, sy = bx - fw_x, by - fw_y
        ds = math.hypot(sx, sy)
        if d <= DELTA_SINGULAR or ds <= DELTA_SINGULAR:
            raise CoincidentPoints(f"beacon ({bx:.6g}, {by:.6g}) coincides with the agent or reference")
        total += w * (d - (ex * sx + ey * sy) / ds)
    return total


def v1(agent, beacons: BeaconSet, fw, t: float = 0.0) -> float:
    p = as_vec2(agent, "agent")
    f = as_vec2(fw, "fw")
    return v1_xy(float(p[0]), float(p[1]), float(f[0]), float(f[1]), beacons, t)


def _along(agent, heading, beacons, t):
    p = as_vec2(agent, "agent")
    h = require_unit(heading, "heading")
    sx, sy, _ = bearing_sum_xy(p[0], p[1], beacons, t)
    return h, sx, sy


def v1_dot_analytic(agent, heading, beacons: BeaconSet, k_p: float) -> float:
    """Rate of ``v1`` under the unsaturated stationary law."""
    h, sx, sy = _along(agent, heading, beacons, 0.0)
    return -k_p * (h[0] * sx + h[1] * sy) ** 2


def v1_dot_saturated(agent, heading, beacons: BeaconSet, limits: SaturationLimits) -> float:
    """Rate of ``v1`` under the saturated law; ``kappa`` scales the unsaturated rate."""
    h, sx, sy = _along(agent, heading, beacons, 0.0)
    kappa, _ = saturation_factors(limits, h, (sx, sy))
    return -kappa * (h[0] * sx + h[1] * sy) ** 2


def target_heading(beacons: BeaconSet) -> np.ndarray:
    speed = float(np.hypot(*beacons.velocity))
    if speed == 0.0:
        raise ZeroTargetVelocity("beacons are stationary; v2 is undefined")
    return beacons.velocity / speed


def v2(agent, heading, comp: CompensatorState, beacons: BeaconSet, fw, gains: MovingGains,
       t: float = 0.0) -> float:
    target_heading(beacons)
    h = require_unit(heading, "heading")
    p, f = as_vec2(agent, "agent"), as_vec2(fw, "fw")
    return v2_xy(p[0], p[1], h[0], h[1], comp.phi[0], comp.phi[1], f[0], f[1], beacons, gains, t)


def v2_xy(x, y, hx, hy, phi_x, phi_y, fw_x, fw_y, beacons: BeaconSet, gains: MovingGains,
          t: float = 0.0) -> float:
    vx, vy = beacons._v
    speed = math.hypot(vx, vy)
    if speed == 0.0:
        raise ZeroTargetVelocity("beacons are stationary; v2 is undefined")
    dphi2 = (phi_x - vx) ** 2 + (phi_y - vy) ** 2
    dh2 = (hx - vx / speed) ** 2 + (hy - vy / speed) ** 2
    return (v1_xy(x, y, fw_x, fw_y, beacons, t)
            + dphi2 / (2 * gains.k3)
            + speed * dh2 / (2 * gains.k2))


def v2_dot_analytic(agent, heading, comp: CompensatorState, beacons: BeaconSet, k1: float,
                    t: float = 0.0) -> float:
    h, sx, sy = _along(agent, heading, beacons, t)
    return v2_dot_xy(h[0], h[1], sx, sy, comp.phi[0], comp.phi[1], k1)


def v2_dot_xy(hx, hy, sx, sy, phi_x, phi_y, k1):
    along = hx * sx + hy * sy
    cross_phi = hx * phi_y - hy * phi_x
    return -k1 * along ** 2 - cross_phi ** 2


def orthogonality_residual(agent_velocity, beacons: BeaconSet, agent) -> float:
    """``|sum_i w_i g_i^T P_{g_i} de_i/dt|`` for stationary beacons; zero in exact arithmetic."""
    v = as_vec2(agent_velocity, "agent_velocity")
    g = bearings(agent, beacons.positions)
    total = 0.0
    for gi, wi in zip(g, beacons.weights):
        total += wi * float(gi @ projection(gi) @ (-v))
    return abs(total)


def projection_sum(beacons: BeaconSet, fw, t: float = 0.0) -> np.ndarray:
    g = bearings(fw, beacons.positions_at(t))
    return np.einsum("i,ij,ik->jk", beacons.weights, -g, g) + beacons.weights.sum() * np.eye(2)


def lambda_min(beacons: BeaconSet, fw, t: float = 0.0) -> float:
    return sym2_eigvalsh(projection_sum(beacons, fw, t))[0]


def _dstar(beacons, fw, t=0.0):
    e = beacons.positions_at(t) - as_vec2(fw, "fw")
    return np.hypot(e[:, 0], e[:, 1])


def collision_certificate(initial_V: float, beacons: BeaconSet, fw) -> CollisionCertificate:
    """Radius ``xi`` bounding ``|p - p*|`` for all time given ``V(0) = initial_V``."""
    if initial_V < 0:
        raise ValueError(f"initial_V must be nonnegative, got {initial_V!r}")
    lam = lambda_min(beacons, fw)
    if lam <= PD_TOL:
        raise NotPositiveDefinite(f"projection sum has smallest eigenvalue {lam!r}")
    d = _dstar(beacons, fw)
    dmin, dmax = float(d.min()), float(d.max())
    sigma = 2.0 * initial_V / lam
    xi = 0.5 * (sigma + math.sqrt(sigma * sigma + 4.0 * sigma * dmax))
    return CollisionCertificate(lam, sigma, xi, dmin, dmax, xi < dmin)


def certified_v_threshold(beacons: BeaconSet, fw) -> float:
    """Initial ``V`` at which ``xi`` reaches the nearest beacon distance.

    Any strictly smaller ``V(0)`` yields a guaranteed certificate.
    """
    lam = lambda_min(beacons, fw)
    d = _dstar(beacons, fw)
    dmin, dmax = float(d.min()), float(d.max())
    return 0.5 * lam * dmin * dmin / (dmin + dmax)


def v1_lower_bound(agent, beacons: BeaconSet, fw, t: float = 0.0) -> float:
    """Quadratic-over-linear lower bound on ``v1`` in terms of ``|p - p*|``."""
    r = float(np.hypot(*(as_vec2(agent, "agent") - as_vec2(fw, "fw"))))
    dmax = float(_dstar(beacons, fw, t).max())
    return lambda_min(beacons, fw, t) * r * r / (2.0 * (r + dmax))
