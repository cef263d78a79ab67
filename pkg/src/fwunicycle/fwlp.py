"""Ground-truth Fermat-Weber point: existence test, Weiszfeld solver, grid oracle.

Nothing here is used as feedback by the controllers. These routines provide the
reference point against which closed-loop tracking error is measured.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .geometry import DELTA_SINGULAR, BeaconSet, as_vec2, bearing_sum_xy

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


class SolveStatus(enum.Enum):
    CONVERGED = "Converged"
    BEACON_OPTIMAL = "BeaconOptimal"
    MAX_ITERATIONS = "MaxIterations"


@dataclass(frozen=True)
class FwSolution:
    point: np.ndarray
    residual: float
    iterations: int
    status: SolveStatus
    beacon_index: int | None = None

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED


def objective(point, beacons: BeaconSet) -> float:
    """Weighted sum of distances from ``point`` to the beacons."""
    e = beacons.positions - as_vec2(point, "point")
    return float(np.dot(beacons.weights, np.hypot(e[:, 0], e[:, 1])))


def pull_at_beacon(beacons: BeaconSet, k: int) -> np.ndarray:
    """Weighted sum of unit vectors from beacon ``k`` to all other beacons."""
    e = np.delete(beacons.positions, k, axis=0) - beacons.positions[k]
    w = np.delete(beacons.weights, k)
    d = np.hypot(e[:, 0], e[:, 1])
    return (w[:, None] * e / d[:, None]).sum(axis=0)


def existence_check(beacons: BeaconSet) -> list[bool]:
    """Per-beacon test that the remaining beacons out-pull beacon ``k``.

    All entries true means the minimiser is unique and lies away from every
    beacon. Entry ``k`` false means beacon ``k`` itself minimises the objective.
    """
    return [bool(np.linalg.norm(pull_at_beacon(beacons, k)) > beacons.weights[k])
            for k in range(beacons.n)]


def optimality_residual(point, beacons: BeaconSet) -> float:
    """Norm of the weighted bearing sum at ``point``; zero exactly at the minimiser."""
    p = as_vec2(point, "point")
    sx, sy, _ = bearing_sum_xy(p[0], p[1], beacons)
    return math.hypot(sx, sy)


def weiszfeld_iterates(beacons: BeaconSet, max_iter: int = DEFAULT_MAX_ITER) -> Iterator[np.ndarray]:
    """Yield the plain Weiszfeld iterates starting from the weighted centroid.

    Stops early (without raising) if an iterate lands on a beacon; callers that
    need the singular-case handling should use :func:`weiszfeld`.
    """
    pos, w = beacons.positions, beacons.weights
    p = (w[:, None] * pos).sum(axis=0) / w.sum()
    yield p
    for _ in range(max_iter):
        e = pos - p
        d = np.hypot(e[:, 0], e[:, 1])
        if np.any(d <= DELTA_SINGULAR):
            return
        q = w / d
        p = (q[:, None] * pos).sum(axis=0) / q.sum()
        yield p


def _nearest_beacon(p, pos):
    e = pos - p
    d = np.hypot(e[:, 0], e[:, 1])
    k = int(np.argmin(d))
    return k, float(d[k])


def weiszfeld(beacons: BeaconSet, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> FwSolution:
    """Solve for the Fermat-Weber point by Weiszfeld's fixed-point iteration.

    Convergence is judged on the optimality residual ``|sum_i w_i g_i|``, not on
    step size. A beacon that wins the existence test is returned directly with
    status ``BeaconOptimal``: at such a beacon the plain iteration only creeps
    in sublinearly.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    pos, w = beacons.positions, beacons.weights

    for k, ok in enumerate(existence_check(beacons)):
        if not ok:
            return _beacon_solution(beacons, k, 0)

    p = (w[:, None] * pos).sum(axis=0) / w.sum()
    residual = math.inf
    for it in range(max_iter + 1):
        k, dk = _nearest_beacon(p, pos)
        if dk <= DELTA_SINGULAR:
            pull = pull_at_beacon(beacons, k)
            norm = float(np.linalg.norm(pull))
            if norm <= w[k]:
                return _beacon_solution(beacons, k, it)
            # step off the beacon along the direction of steepest descent
            p = pos[k] + 10 * DELTA_SINGULAR * pull / norm
            continue
        residual = optimality_residual(p, beacons)
        if residual <= tol:
            return FwSolution(p.copy(), residual, it, SolveStatus.CONVERGED)
        if it == max_iter:
            break
        e = pos - p
        q = w / np.hypot(e[:, 0], e[:, 1])
        p = (q[:, None] * pos).sum(axis=0) / q.sum()
    return FwSolution(p.copy(), residual, max_iter, SolveStatus.MAX_ITERATIONS)


def _beacon_solution(beacons: BeaconSet, k: int, iterations: int) -> FwSolution:
    # subgradient gap at the beacon: zero means optimal
    gap = max(0.0, float(np.linalg.norm(pull_at_beacon(beacons, k))) - float(beacons.weights[k]))
    return FwSolution(beacons.positions[k].copy(), gap, iterations, SolveStatus.BEACON_OPTIMAL, k)


def fw_point_at_time(initial_solution: FwSolution, velocity, t: float) -> np.ndarray:
    """Fermat-Weber point of beacons that have drifted for ``t`` seconds.

    A common translation leaves the relative geometry unchanged, so the
    minimiser simply rides along with the beacons.
    """
    if initial_solution.status is not SolveStatus.CONVERGED:
        raise ValueError(f"initial solution has status {initial_solution.status.value}")
    return initial_solution.point + as_vec2(velocity, "velocity") * t


def grid_minimizer(beacons: BeaconSet, resolution: float = 1e-3, inflate: float = 0.5) -> np.ndarray:
    """Exhaustive grid search for the minimiser of the weighted distance sum.

    The grid covers the beacon bounding box grown by ``inflate`` (relative to
    its width) and is independent of the Weiszfeld code path.
    """
    pos, w = beacons.positions, beacons.weights
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo) * (1.0 + inflate)
    xs = np.arange(centre[0] - half[0], centre[0] + half[0] + 0.5 * resolution, resolution)
    ys = np.arange(centre[1] - half[1], centre[1] + half[1] + 0.5 * resolution, resolution)
    f = np.zeros((xs.size, ys.size))
    buf = np.empty_like(f)
    for (bx, by), wi in zip(pos, w):
        np.add(((xs - bx) ** 2)[:, None], ((ys - by) ** 2)[None, :], out=buf)
        np.sqrt(buf, out=buf)
        buf *= wi
        f += buf
    i, j = np.unravel_index(np.argmin(f), f.shape)
    return np.array([xs[i], ys[j]])
