import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fwunicycle.controllers import (
    CompensatorState,
    MovingBeaconController,
    MovingGains,
    SaturatedController,
    SaturationLimits,
    StationaryController,
    StationaryGains,
    command,
    compensator_derivative,
    control_moving,
    control_saturated,
    control_stationary,
    sat_nu,
    sat_omega,
    saturation_factors,
)
from fwunicycle.errors import NotUnit

LIMITS = SaturationLimits(0.05, 0.05, 0.5, 0.5)
H0 = (1.0, 0.0)
finite = st.floats(-1e3, 1e3, allow_nan=False)
angle = st.floats(-math.pi, math.pi)
positive = st.floats(1e-3, 10.0)


def unit(theta):
    return (math.cos(theta), math.sin(theta))


def test_stationary_examples():
    g = StationaryGains(0.5, 1.0)
    assert control_stationary(g, H0, (0, 0)) == control_stationary(g, H0, (0.0, 0.0))
    c = control_stationary(g, H0, (0.0, 0.0))
    assert (c.nu, c.omega) == (0.0, 0.0)
    c = control_stationary(g, H0, (2.0, 0.0))
    assert (c.nu, c.omega) == (1.0, 0.0)
    c = control_stationary(g, H0, (0.0, 3.0))
    assert (c.nu, c.omega) == (0.0, 3.0)


def test_heading_must_be_unit():
    with pytest.raises(NotUnit):
        control_stationary(StationaryGains(), (1.0, 0.1), (1.0, 0.0))


@pytest.mark.parametrize("cls, args", [
    (StationaryGains, (0.0, 1.0)),
    (StationaryGains, (1.0, -1.0)),
    (SaturationLimits, (0.05, 0.0, 0.5, 0.5)),
    (MovingGains, (1.0, 5.0, 0.0)),
])
def test_gains_must_be_positive(cls, args):
    with pytest.raises(ValueError):
        cls(*args)


def test_sat_examples():
    assert sat_nu(LIMITS, 0.1) == 0.05
    assert sat_nu(LIMITS, 0.0) == 0.0
    assert sat_nu(LIMITS, -0.2) == -0.05
    assert sat_omega(LIMITS, 1.2) == 0.5
    assert sat_omega(LIMITS, 0.3) == 0.3
    assert sat_omega(LIMITS, -0.7) == -0.5


def test_saturated_examples():
    c = control_saturated(LIMITS, H0, (0.0, 0.0))
    assert (c.nu, c.omega) == (0.0, 0.0)
    c = control_saturated(LIMITS, H0, (4.0, 0.0))
    assert (c.nu, c.omega) == (0.05, 0.0)
    inside = control_saturated(LIMITS, unit(0.4), (0.01, -0.02))
    ref = control_stationary(StationaryGains(1.0, 1.0), unit(0.4), (0.01, -0.02))
    assert (inside.nu, inside.omega) == (ref.nu, ref.omega)


def test_factor_examples():
    assert saturation_factors(LIMITS, H0, (0.02, 0.0))[0] == 1.0
    assert saturation_factors(LIMITS, H0, (0.1, 0.0))[0] == 0.5
    assert saturation_factors(LIMITS, H0, (0.0, -1.0))[1] == 0.5
    assert saturation_factors(LIMITS, H0, (0.0, 0.0)) == (1.0, 1.0)


@given(angle, finite, finite, positive, positive, positive, positive)
def test_saturated_within_limits(theta, sx, sy, nb, nf, wr, wl):
    lim = SaturationLimits(nb, nf, wr, wl)
    c = control_saturated(lim, unit(theta), (sx, sy))
    assert -nb <= c.nu <= nf
    assert -wr <= c.omega <= wl


@given(angle, finite, finite, positive, positive, positive, positive)
def test_factors_reproduce_saturation(theta, sx, sy, nb, nf, wr, wl):
    lim = SaturationLimits(nb, nf, wr, wl)
    h = unit(theta)
    kappa, rho = saturation_factors(lim, h, (sx, sy))
    assert 0 < kappa <= 1 and 0 < rho <= 1
    raw_nu = h[0] * sx + h[1] * sy
    raw_om = h[0] * sy - h[1] * sx
    assert abs(kappa * raw_nu - sat_nu(lim, raw_nu)) <= 1e-12
    assert abs(rho * raw_om - sat_omega(lim, raw_om)) <= 1e-12
    if -nb <= raw_nu <= nf:
        assert kappa == 1.0
    if -wr <= raw_om <= wl:
        assert rho == 1.0


def test_moving_examples():
    g = MovingGains(1.0, 5.0, 1.0)
    v = np.array([0.1, 0.1])
    h = v / np.linalg.norm(v)
    c = control_moving(g, h, (0, 0), CompensatorState(v))
    assert math.isclose(c.nu, np.linalg.norm(v), rel_tol=1e-15)
    assert abs(c.omega) <= 1e-16
    c = control_moving(g, H0, (0.2, 0.4), CompensatorState((0.1, 0.1)))
    assert math.isclose(c.nu, 0.3, rel_tol=1e-15)
    assert math.isclose(c.omega, 2.5, rel_tol=1e-15)


@given(angle, finite, finite, positive, positive)
def test_moving_reduces_to_stationary(theta, sx, sy, k1, k2):
    m = control_moving(MovingGains(k1, k2, 1.0), unit(theta), (sx, sy), CompensatorState((0.0, 0.0)))
    s = control_stationary(StationaryGains(k1, k2), unit(theta), (sx, sy))
    assert abs(m.nu - s.nu) <= 1e-15 * max(1.0, abs(s.nu))
    assert abs(m.omega - s.omega) <= 1e-15 * max(1.0, abs(s.omega))


def test_compensator_examples():
    g = MovingGains(1.0, 5.0, 1.0)
    np.testing.assert_array_equal(compensator_derivative(g, H0, (0, 0), CompensatorState((0.3, 0.0))), (0, 0))
    np.testing.assert_array_equal(compensator_derivative(g, H0, (1, 1), CompensatorState((0, 0))), (1, 0))
    np.testing.assert_array_equal(compensator_derivative(g, H0, (0, 0), CompensatorState((0, 1))), (0, -1))


@given(angle, finite, finite, st.floats(-10, 10), st.floats(-10, 10), positive)
def test_compensator_vector_form(theta, sx, sy, fx, fy, k3):
    h = np.array(unit(theta))
    s, phi = np.array([sx, sy]), np.array([fx, fy])
    hh = np.outer(h, h)
    ref = k3 * (hh @ s - (np.eye(2) - hh) @ phi)
    got = compensator_derivative(MovingGains(1, 1, k3), h, s, CompensatorState(phi))
    np.testing.assert_allclose(got, ref, atol=1e-9 * (1 + np.abs(ref).max()))


def test_command_dispatch():
    s = (0.3, -0.4)
    h = unit(0.2)
    assert command(StationaryController(StationaryGains(0.5, 1.0)), h, s) == \
        control_stationary(StationaryGains(0.5, 1.0), h, s)
    assert command(SaturatedController(LIMITS), h, s) == control_saturated(LIMITS, h, s)
    mc = MovingBeaconController(MovingGains(1, 5, 1), (0.1, 0.0))
    assert command(mc, h, s) == control_moving(mc.gains, h, s, CompensatorState((0.1, 0.0)))
    assert command(mc, h, s, phi=(0.0, 0.2)) == control_moving(mc.gains, h, s, CompensatorState((0.0, 0.2)))
    with pytest.raises(TypeError):
        command(object(), h, s)
