"""Planar vector helpers, bearings and projection operators.

Vectors are plain ``numpy`` arrays of shape ``(2,)`` and matrices are ``(2, 2)``
arrays. The hot simulation loop goes through :func:`bearing_sum_xy`, which works
on Python floats and avoids array allocation for the handful of beacons involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoincidentPoints, InvalidBeacons, NotUnit

#: Separation (m) below which a bearing is considered undefined.
DELTA_SINGULAR = 1e-6
#: Relative singular-value threshold for the non-collinearity test.
COLLINEAR_RTOL = 1e-9
UNIT_TOL = 1e-9

I2 = np.eye(2)
I2.setflags(write=False)


def as_vec2(v, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a finite float array of shape (2,)."""
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.shape != (2,):
        raise ValueError(f"{name} must have exactly two components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite components: {arr}")
    return arr


def vec2(x: float, y: float) -> np.ndarray:
    return as_vec2((x, y))


def require_unit(v, name: str = "vector", tol: float = UNIT_TOL) -> np.ndarray:
    arr = as_vec2(v, name)
    norm = math.hypot(arr[0], arr[1])
    if abs(norm - 1.0) > tol:
        raise NotUnit(f"{name} must be a unit vector, has norm {norm!r}")
    return arr


def perp(v) -> np.ndarray:
    """Rotate a planar vector by +90 degrees."""
    return np.array([-v[1], v[0]], dtype=float)


def bearing(agent, beacon) -> np.ndarray:
    """Unit vector from ``agent`` towards ``beacon``."""
    a = as_vec2(agent, "agent")
    b = as_vec2(beacon, "beacon")
    ex, ey = b[0] - a[0], b[1] - a[1]
    d = math.hypot(ex, ey)
    if d <= DELTA_SINGULAR:
        raise CoincidentPoints(f"agent {a} and beacon {b} are {d:.3g} m apart")
    return np.array([ex / d, ey / d])


def projection(g) -> np.ndarray:
    """Orthogonal projection ``I - g g^T`` onto the complement of unit vector ``g``."""
    g = require_unit(g, "g")
    return I2 - np.outer(g, g)


@dataclass(frozen=True)
class BeaconSet:
    """Weighted planar beacons sharing a common constant velocity.

    ``positions`` are the beacon locations at ``t = 0``. Arrays are stored
    read-only so instances can be shared freely.
    """

    positions: np.ndarray
    weights: np.ndarray
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        w = np.array(self.weights, dtype=float).reshape(-1)
        vel = as_vec2(self.velocity, "beacon velocity")
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise InvalidBeacons(f"positions must be an (n, 2) array, got shape {pos.shape}")
        if pos.shape[0] != w.shape[0]:
            raise InvalidBeacons(
                f"{pos.shape[0]} positions but {w.shape[0]} weights")
        if pos.shape[0] < 3:
            raise InvalidBeacons(f"at least 3 beacons are required, got {pos.shape[0]}")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(w))):
            raise InvalidBeacons("beacon positions and weights must be finite")
        bad = np.flatnonzero(w <= 0)
        if bad.size:
            raise InvalidBeacons(f"beacon weights must be positive; weight[{bad[0]}] = {w[bad[0]]!r}")
        for i in range(len(pos)):
            for j in range(i):
                if math.hypot(*(pos[i] - pos[j])) <= DELTA_SINGULAR:
                    raise InvalidBeacons(f"beacons {j} and {i} coincide")
        if is_collinear(pos):
            raise InvalidBeacons("beacons are collinear; the Fermat-Weber problem needs a 2D spread")
        for arr in (pos, w, vel):
            arr.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "velocity", vel)
        # float copies for the simulation kernel
        object.__setattr__(self, "_xs", tuple(float(x) for x in pos[:, 0]))
        object.__setattr__(self, "_ys", tuple(float(y) for y in pos[:, 1]))
        object.__setattr__(self, "_ws", tuple(float(x) for x in w))
        object.__setattr__(self, "_v", (float(vel[0]), float(vel[1])))

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def is_moving(self) -> bool:
        return bool(self.velocity[0] != 0.0 or self.velocity[1] != 0.0)

    def positions_at(self, t: float) -> np.ndarray:
        return self.positions + self.velocity * t

    def translated(self, offset) -> "BeaconSet":
        return BeaconSet(self.positions + as_vec2(offset, "offset"), self.weights, self.velocity)

    def with_weights(self, weights) -> "BeaconSet":
        return BeaconSet(self.positions, weights, self.velocity)

    def __eq__(self, other):
        if not isinstance(other, BeaconSet):
            return NotImplemented
        return (np.array_equal(self.positions, other.positions)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.velocity, other.velocity))

    __hash__ = None


def is_collinear(positions, rtol: float = COLLINEAR_RTOL) -> bool:
    """Smallest singular value of the centred 2 x n position matrix, relative to the largest."""
    pos = np.asarray(positions, dtype=float)
    centred = (pos - pos.mean(axis=0)).T
    sv = np.linalg.svd(centred, compute_uv=False)
    if sv[0] == 0.0:
        return True
    return sv[-1] <= rtol * sv[0]


def bearing_sum_xy(x: float, y: float, beacons: BeaconSet, t: float = 0.0):
    """Weighted bearing sum at ``(x, y)`` against beacons at time ``t``.

    Returns ``(sx, sy, dmin)`` where ``dmin`` is the distance to the nearest
    beacon. Raises :class:`CoincidentPoints` below ``DELTA_SINGULAR``.
    """
    if t:
        # beacons translate rigidly, so shift the agent instead
        x -= beacons._v[0] * t
        y -= beacons._v[1] * t
    sx = sy = 0.0
    dmin = math.inf
    for bx, by, w in zip(beacons._xs, beacons._ys, beacons._ws):
        ex = bx - x
        ey = by - y
        d = math.hypot(ex, ey)
        if d < dmin:
            dmin = d
        if d <= DELTA_SINGULAR:
            raise CoincidentPoints(f"agent ({x:.6g}, {y:.6g}) is {d:.3g} m from beacon ({bx}, {by})")
        sx += w * ex / d
        sy += w * ey / d
    return sx, sy, dmin


def weighted_bearing_sum(agent, beacons: BeaconSet, t: float = 0.0) -> np.ndarray:
    """Sum of weighted unit bearings from ``agent`` to every beacon."""
    a = as_vec2(agent, "agent")
    sx, sy, _ = bearing_sum_xy(a[0], a[1], beacons, t)
    return np.array([sx, sy])


def bearings(agent, positions) -> np.ndarray:
    """Row-stacked unit bearings from ``agent`` to each row of ``positions``."""
    e = np.asarray(positions, dtype=float) - as_vec2(agent, "agent")
    d = np.hypot(e[:, 0], e[:, 1])
    if np.any(d <= DELTA_SINGULAR):
        k = int(np.argmin(d))
        raise CoincidentPoints(f"agent is {d[k]:.3g} m from beacon {k}")
    return e / d[:, None]


def min_beacon_distance(agent, beacons: BeaconSet, t: float = 0.0) -> float:
    e = beacons.positions_at(t) - as_vec2(agent, "agent")
    return float(np.min(np.hypot(e[:, 0], e[:, 1])))


def sym2_eigvalsh(m) -> tuple[float, float]:
    """Closed-form eigenvalues (ascending) of a symmetric 2x2 matrix."""
    a, b, d = float(m[0][0]), float(m[0][1]), float(m[1][1])
    mean = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), b)
    return mean - rad, mean + rad
