"""Bearing-only control laws for the unicycle.

Every law here sees only the agent's own heading ``h``, the weighted bearing
sum ``s = sum_i w_i g_i`` and, for moving beacons, the compensator state
``phi``. Distances, positions and velocities never enter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .dynamics import ControlCommand
from .errors import NotUnit
from .geometry import UNIT_TOL, as_vec2


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class StationaryGains:
    k_p: float = 0.5
    k_h: float = 1.0

    def __post_init__(self):
        _positive("k_p", self.k_p)
        _positive("k_h", self.k_h)


@dataclass(frozen=True)
class SaturationLimits:
    nu_b: float = 0.05
    nu_f: float = 0.05
    omega_r: float = 0.5
    omega_l: float = 0.5

    def __post_init__(self):
        for name in ("nu_b", "nu_f", "omega_r", "omega_l"):
            _positive(name, getattr(self, name))


@dataclass(frozen=True)
class MovingGains:
    k1: float = 1.0
    k2: float = 5.0
    k3: float = 1.0

    def __post_init__(self):
        for name in ("k1", "k2", "k3"):
            _positive(name, getattr(self, name))


@dataclass(frozen=True)
class CompensatorState:
    phi: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        phi = as_vec2(self.phi, "phi")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class StationaryController:
    gains: StationaryGains = field(default_factory=StationaryGains)
    kind = "stationary"


@dataclass(frozen=True)
class SaturatedController:
    limits: SaturationLimits = field(default_factory=SaturationLimits)
    kind = "saturated"


@dataclass(frozen=True)
class MovingBeaconController:
    gains: MovingGains = field(default_factory=MovingGains)
    phi0: np.ndarray = field(default_factory=lambda: np.zeros(2))
    kind = "moving"

    def __post_init__(self):
        phi0 = as_vec2(self.phi0, "phi0")
        phi0.setflags(write=False)
        object.__setattr__(self, "phi0", phi0)

    def __eq__(self, other):
        if not isinstance(other, MovingBeaconController):
            return NotImplemented
        return self.gains == other.gains and np.array_equal(self.phi0, other.phi0)

    __hash__ = None


ControllerKind = Union[StationaryController, SaturatedController, MovingBeaconController]


def _unit_xy(heading) -> tuple[float, float]:
    hx, hy = float(heading[0]), float(heading[1])
    if abs(math.hypot(hx, hy) - 1.0) > UNIT_TOL:
        raise NotUnit(f"heading must be a unit vector, got ({hx!r}, {hy!r})")
    return hx, hy


def _xy(v) -> tuple[float, float]:
    return float(v[0]), float(v[1])


def control_stationary(gains: StationaryGains, heading, bearings) -> ControlCommand:
    """Speed from the along-heading and turn rate from the cross-heading part of ``s``."""
    hx, hy = _unit_xy(heading)
    sx, sy = _xy(bearings)
    return ControlCommand(*stationary_xy(gains.k_p, gains.k_h, hx, hy, sx, sy))


def stationary_xy(k_p, k_h, hx, hy, sx, sy):
    return k_p * (hx * sx + hy * sy), k_h * (hx * sy - hy * sx)


def clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def sat_nu(limits: SaturationLimits, x: float) -> float:
    return clamp(x, -limits.nu_b, limits.nu_f)


def sat_omega(limits: SaturationLimits, x: float) -> float:
    return clamp(x, -limits.omega_r, limits.omega_l)


def control_saturated(limits: SaturationLimits, heading, bearings) -> ControlCommand:
    hx, hy = _unit_xy(heading)
    sx, sy = _xy(bearings)
    return ControlCommand(*saturated_xy(limits, hx, hy, sx, sy))


def saturated_xy(limits, hx, hy, sx, sy):
    return sat_nu(limits, hx * sx + hy * sy), sat_omega(limits, hx * sy - hy * sx)


def _factor(raw: float, lo: float, hi: float) -> float:
    if raw > hi:
        return hi / raw
    if raw < -lo:
        return -lo / raw
    return 1.0


def saturation_factors(limits: SaturationLimits, heading, bearings) -> tuple[float, float]:
    """Multipliers ``(kappa, rho)`` with ``sat(raw) == factor * raw`` on each channel.

    Both lie in (0, 1] and are exactly 1 inside the limit bands, including at a
    raw value of zero.
    """
    hx, hy = _unit_xy(heading)
    sx, sy = _xy(bearings)
    kappa = _factor(hx * sx + hy * sy, limits.nu_b, limits.nu_f)
    rho = _factor(hx * sy - hy * sx, limits.omega_r, limits.omega_l)
    return kappa, rho


def control_moving(gains: MovingGains, heading, bearings, comp: CompensatorState) -> ControlCommand:
    hx, hy = _unit_xy(heading)
    sx, sy = _xy(bearings)
    fx, fy = _xy(comp.phi)
    return ControlCommand(*moving_xy(gains, hx, hy, sx, sy, fx, fy))


def moving_xy(gains, hx, hy, sx, sy, fx, fy):
    nu = gains.k1 * (hx * sx + hy * sy) + (hx * fx + hy * fy)
    omega = gains.k2 * (hx * (sy + fy) - hy * (sx + fx))
    return nu, omega


def compensator_derivative(gains: MovingGains, heading, bearings, comp: CompensatorState) -> np.ndarray:
    """``k3 * (h h^T s - (I - h h^T) phi)``: feeds along-heading pull in, leaks the transverse part."""
    hx, hy = _unit_xy(heading)
    sx, sy = _xy(bearings)
    fx, fy = _xy(comp.phi)
    return np.array(compensator_xy(gains.k3, hx, hy, sx, sy, fx, fy))


def compensator_xy(k3, hx, hy, sx, sy, fx, fy):
    hs = hx * sx + hy * sy
    hphi = hx * fx + hy * fy
    return k3 * (hx * hs - (fx - hx * hphi)), k3 * (hy * hs - (fy - hy * hphi))


def command(controller: ControllerKind, heading, bearings, phi=None) -> ControlCommand:
    """Dispatch to the law matching ``controller``."""
    if isinstance(controller, StationaryController):
        return control_stationary(controller.gains, heading, bearings)
    if isinstance(controller, SaturatedController):
        return control_saturated(controller.limits, heading, bearings)
    if isinstance(controller, MovingBeaconController):
        comp = CompensatorState(controller.phi0 if phi is None else phi)
        return control_moving(controller.gains, heading, bearings, comp)
    raise TypeError(f"unknown controller {controller!r}")
