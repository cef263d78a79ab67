"""Kinematic unicycle model and fixed-step RK4 integration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import as_vec2


def wrap_angle(theta: float) -> float:
    """Wrap an angle to the half-open interval (-pi, pi]."""
    w = math.remainder(theta, 2 * math.pi)
    return math.pi if w == -math.pi else w


@dataclass(frozen=True)
class UnicycleState:
    position: np.ndarray
    heading: float

    def __post_init__(self):
        p = as_vec2(self.position, "position")
        p.setflags(write=False)
        theta = float(self.heading)
        if not math.isfinite(theta):
            raise ValueError(f"heading must be finite, got {theta!r}")
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "heading", wrap_angle(theta))

    @classmethod
    def from_xyt(cls, x: float, y: float, theta: float) -> "UnicycleState":
        return cls(np.array([x, y], dtype=float), theta)

    @property
    def x(self) -> float:
        return float(self.position[0])

    @property
    def y(self) -> float:
        return float(self.position[1])

    def __eq__(self, other):
        if not isinstance(other, UnicycleState):
            return NotImplemented
        return np.array_equal(self.position, other.position) and self.heading == other.heading

    __hash__ = None


@dataclass(frozen=True)
class ControlCommand:
    nu: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.nu) and math.isfinite(self.omega)):
            raise ValueError(f"non-finite command ({self.nu!r}, {self.omega!r})")


def heading_vector(state: UnicycleState) -> np.ndarray:
    return np.array([math.cos(state.heading), math.sin(state.heading)])


def heading_perp(state: UnicycleState) -> np.ndarray:
    return np.array([-math.sin(state.heading), math.cos(state.heading)])


def derivative(state: UnicycleState, cmd: ControlCommand) -> tuple[np.ndarray, float]:
    """Return ``(p_dot, theta_dot)`` for the unicycle under ``cmd``."""
    return cmd.nu * heading_vector(state), cmd.omega


def rk4_step(f: Callable[[float, Sequence[float]], Sequence[float]],
             t: float, y: Sequence[float], dt: float) -> list[float]:
    """One classical Runge-Kutta step for ``y' = f(t, y)`` on plain float lists."""
    k1 = f(t, y)
    y2 = [a + 0.5 * dt * b for a, b in zip(y, k1)]
    k2 = f(t + 0.5 * dt, y2)
    y3 = [a + 0.5 * dt * b for a, b in zip(y, k2)]
    k3 = f(t + 0.5 * dt, y3)
    y4 = [a + dt * b for a, b in zip(y, k3)]
    k4 = f(t + dt, y4)
    return [a + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]


def step(state: UnicycleState, cmd: ControlCommand, dt: float) -> UnicycleState:
    """Advance the unicycle by ``dt`` with ``cmd`` held constant (zero-order hold)."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    nu, omega = cmd.nu, cmd.omega

    def f(_t, y):
        return (nu * math.cos(y[2]), nu * math.sin(y[2]), omega)

    x, y, theta = rk4_step(f, 0.0, (state.x, state.y, state.heading), dt)
    return UnicycleState(np.array([x, y]), theta)
