"""Closed-loop simulation of a unicycle steered by a bearing-only law.

The integrated state is ``(x, y, theta, phi_x, phi_y)``; the compensator entries
stay at zero for the laws that have none. Controls are re-evaluated at every
RK4 stage, so the integrator sees the continuous closed loop. Beacons move
analytically and the Fermat-Weber reference rides along with them.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .controllers import (
    MovingBeaconController,
    SaturatedController,
    StationaryController,
    compensator_xy,
    moving_xy,
    saturated_xy,
    saturation_factors,
    stationary_xy,
)
from .dynamics import wrap_angle
from .errors import CoincidentPoints, FWError, SolverFailed
from .fwlp import FwSolution, existence_check, fw_point_at_time, weiszfeld
from .geometry import bearing_sum_xy
from .lyapunov import v1_xy, v2_dot_xy, v2_xy
from .scenario import Scenario, apply_override

COLUMNS = ("t", "x", "y", "theta", "nu", "omega", "fw_x", "fw_y", "tracking_error",
           "V", "V_dot_analytic", "phi_x", "phi_y", "min_beacon_distance")
#: Time the tracking error must stay below tolerance before convergence is declared.
DWELL = 1.0


class Outcome(enum.Enum):
    CONVERGED = "Converged"
    TIMEOUT = "Timeout"
    COLLISION = "Collision"


@dataclass
class TrajectoryLog:
    scenario: Scenario
    fw_solution: FwSolution
    existence: list[bool]
    samples: np.ndarray
    outcome: Outcome
    outcome_time: float
    notes: list[str] = field(default_factory=list)
    decimate: int = 1

    def column(self, name: str) -> np.ndarray:
        return self.samples[:, COLUMNS.index(name)]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def final(self) -> dict:
        return dict(zip(COLUMNS, self.samples[-1].tolist()))

    @property
    def final_error(self) -> float:
        return float(self.samples[-1, COLUMNS.index("tracking_error")])

    @property
    def min_distance(self) -> float:
        return float(self.column("min_beacon_distance").min())

    @property
    def convergence_time(self) -> float | None:
        return self.outcome_time if self.outcome is Outcome.CONVERGED else None


def closed_loop(scenario: Scenario):
    """Build ``evaluate(t, y) -> (dy, nu, omega, sx, sy, dmin)`` for the scenario."""
    beacons = scenario.beacons
    ctrl = scenario.controller

    if isinstance(ctrl, StationaryController):
        k_p, k_h = ctrl.gains.k_p, ctrl.gains.k_h

        def law(hx, hy, sx, sy, fx, fy):
            nu, om = stationary_xy(k_p, k_h, hx, hy, sx, sy)
            return nu, om, 0.0, 0.0
    elif isinstance(ctrl, SaturatedController):
        limits = ctrl.limits

        def law(hx, hy, sx, sy, fx, fy):
            nu, om = saturated_xy(limits, hx, hy, sx, sy)
            return nu, om, 0.0, 0.0
    elif isinstance(ctrl, MovingBeaconController):
        gains = ctrl.gains

        def law(hx, hy, sx, sy, fx, fy):
            nu, om = moving_xy(gains, hx, hy, sx, sy, fx, fy)
            dfx, dfy = compensator_xy(gains.k3, hx, hy, sx, sy, fx, fy)
            return nu, om, dfx, dfy
    else:
        raise TypeError(f"unknown controller {ctrl!r}")

    def evaluate(t, y):
        x, yy, theta, fx, fy = y
        sx, sy, dmin = bearing_sum_xy(x, yy, beacons, t)
        hx, hy = math.cos(theta), math.sin(theta)
        nu, om, dfx, dfy = law(hx, hy, sx, sy, fx, fy)
        return (nu * hx, nu * hy, om, dfx, dfy), nu, om, sx, sy, dmin

    return evaluate


def _certificate(scenario: Scenario, fw, t, y, nu, sx, sy):
    """Lyapunov value and its analytic rate for the scenario's control law."""
    beacons = scenario.beacons
    ctrl = scenario.controller
    x, yy, theta, fx, fy = y
    hx, hy = math.cos(theta), math.sin(theta)
    if isinstance(ctrl, MovingBeaconController) and beacons.is_moving:
        return (v2_xy(x, yy, hx, hy, fx, fy, fw[0], fw[1], beacons, ctrl.gains, t),
                v2_dot_xy(hx, hy, sx, sy, fx, fy, ctrl.gains.k1))
    V = v1_xy(x, yy, fw[0], fw[1], beacons, t)
    along = hx * sx + hy * sy
    if not beacons.is_moving:
        if isinstance(ctrl, StationaryController):
            return V, -ctrl.gains.k_p * along ** 2
        if isinstance(ctrl, SaturatedController):
            kappa, _ = saturation_factors(ctrl.limits, (hx, hy), (sx, sy))
            return V, -kappa * along ** 2
    # off-design combinations: exact rate s^T (v* - p_dot)
    vx, vy = beacons._v
    return V, sx * vx + sy * vy - nu * along


def _rk4(evaluate, t, y, dt, k1):
    def f(tt, yy):
        return evaluate(tt, yy)[0]

    y2 = [a + 0.5 * dt * b for a, b in zip(y, k1)]
    k2 = f(t + 0.5 * dt, y2)
    y3 = [a + 0.5 * dt * b for a, b in zip(y, k2)]
    k3 = f(t + 0.5 * dt, y3)
    y4 = [a + dt * b for a, b in zip(y, k3)]
    k4 = f(t + dt, y4)
    return [a + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]


def run(scenario: Scenario, decimate: int = 1) -> TrajectoryLog:
    """Simulate ``scenario`` until convergence, collision or ``t_final``.

    Every ``decimate``-th step is logged, plus the terminal sample. Identical
    scenarios give bit-identical logs.
    """
    if decimate < 1:
        raise ValueError("decimate must be >= 1")
    beacons = scenario.beacons
    notes = []
    existence = existence_check(beacons)
    if not all(existence):
        notes.append("existence check failed at beacons "
                     + ",".join(str(i) for i, ok in enumerate(existence) if not ok))
    sol = weiszfeld(beacons)
    if not sol.converged:
        raise SolverFailed(f"Fermat-Weber solve ended with status {sol.status.value} "
                           f"(residual {sol.residual:.3g})")
    ctrl = scenario.controller
    if beacons.is_moving and not isinstance(ctrl, MovingBeaconController):
        notes.append(f"{ctrl.kind} law used with moving beacons")

    evaluate = closed_loop(scenario)
    phi0 = ctrl.phi0 if isinstance(ctrl, MovingBeaconController) else (0.0, 0.0)
    st = scenario.agent_initial
    y = [st.x, st.y, st.heading, float(phi0[0]), float(phi0[1])]
    dt, n_steps, tol = scenario.dt, scenario.n_steps, scenario.convergence_tolerance
    vel = beacons.velocity

    rows = []
    outcome, outcome_time = Outcome.TIMEOUT, n_steps * dt
    below_since = None
    for k in range(n_steps + 1):
        t = k * dt
        try:
            k1, nu, om, sx, sy, dmin = evaluate(t, y)
        except CoincidentPoints:
            outcome, outcome_time = Outcome.COLLISION, t
            break
        fw = fw_point_at_time(sol, vel, t).tolist()
        err = math.hypot(y[0] - fw[0], y[1] - fw[1])

        terminal = False
        if dmin < scenario.collision_epsilon:
            outcome, outcome_time, terminal = Outcome.COLLISION, t, True
        elif err <= tol:
            if below_since is None:
                below_since = t
            if t - below_since >= DWELL - 1e-9 * dt:
                outcome, outcome_time, terminal = Outcome.CONVERGED, below_since, True
        else:
            below_since = None
        if k == n_steps:
            terminal = True

        if terminal or k % decimate == 0:
            V, Vdot = _certificate(scenario, fw, t, y, nu, sx, sy)
            rows.append((t, y[0], y[1], y[2], nu, om, fw[0], fw[1], err, V, Vdot, y[3], y[4], dmin))
        if terminal:
            break
        try:
            y = _rk4(evaluate, t, y, dt, k1)
        except CoincidentPoints:
            outcome, outcome_time = Outcome.COLLISION, (k + 1) * dt
            break
        y[2] = wrap_angle(y[2])

    samples = np.array(rows, dtype=float).reshape(-1, len(COLUMNS))
    return TrajectoryLog(scenario, sol, existence, samples, outcome, outcome_time, notes, decimate)


def _run_variant(args):
    base, override, index, decimate = args
    try:
        return run(apply_override(base, override, index), decimate)
    except (FWError, ValueError) as exc:
        return exc


def sweep(base: Scenario, variations: Sequence[Mapping], decimate: int = 1,
          max_workers: int | None = None) -> list:
    """Run one simulation per override; failures are returned in place as exceptions.

    Overrides are nested mappings merged into the base scenario document, for
    example ``{"agent": {"x": -3}, "label": "left"}``.
    """
    jobs = [(base, v, i, decimate) for i, v in enumerate(variations)]
    if max_workers and max_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_run_variant, jobs))
    return [_run_variant(job) for job in jobs]
