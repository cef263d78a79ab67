import dataclasses
import math

import numpy as np
import pytest

from fwunicycle.controllers import (
    MovingBeaconController,
    MovingGains,
    SaturatedController,
    SaturationLimits,
    StationaryController,
    StationaryGains,
)
from fwunicycle.dynamics import UnicycleState
from fwunicycle.geometry import BeaconSet
from fwunicycle.lyapunov import v1_lower_bound, collision_certificate, v1
from fwunicycle.scenario import Scenario, load_overrides, load_scenario
from fwunicycle.sim import COLUMNS, Outcome, run, sweep

from oracles import SQUARE, v1_termwise


def square_scenario(x=3.0, y=3.0, theta=math.pi, controller=None, **sim):
    opts = dict(dt=1e-2, t_final=60.0, collision_epsilon=1e-3, convergence_tolerance=1e-2, label="sq")
    opts.update(sim)
    return Scenario(BeaconSet(SQUARE, np.ones(4)), UnicycleState.from_xyt(x, y, theta),
                    controller or StationaryController(StationaryGains(0.5, 1.0)), **opts)


def test_stationary_converges(scenarios_dir):
    log = run(load_scenario(scenarios_dir / "fig1_stationary.yaml"))
    assert log.outcome is Outcome.CONVERGED
    assert log.final_error < 1e-2
    assert log.samples.shape[1] == len(COLUMNS)
    np.testing.assert_array_equal(log["t"], np.arange(len(log)) * 1e-2)


def test_runs_are_bitwise_deterministic(scenarios_dir):
    sc = load_scenario(scenarios_dir / "fig3_saturated.yaml")
    a, b = run(sc), run(sc)
    assert a.samples.tobytes() == b.samples.tobytes()
    assert (a.outcome, a.outcome_time) == (b.outcome, b.outcome_time)


def test_equilibrium_start_stays_put():
    log = run(square_scenario(0.0, 0.0, math.pi / 4, t_final=5.0, convergence_tolerance=1e-12))
    assert np.max(log["tracking_error"]) < 1e-9
    assert log.outcome is Outcome.CONVERGED
    assert log.outcome_time == 0.0


def test_dwell_before_convergence():
    log = run(square_scenario(0.0, 0.0, 0.0, t_final=5.0))
    assert log.outcome is Outcome.CONVERGED
    assert math.isclose(log["t"][-1], 1.0, abs_tol=1e-12)


def test_timeout_covers_full_horizon():
    log = run(square_scenario(t_final=2.0))
    assert log.outcome is Outcome.TIMEOUT
    assert math.isclose(log["t"][-1], 2.0)
    assert len(log) == 201


def test_collision_is_terminal():
    # heads straight at the beacon at (2, 2)
    sc = square_scenario(2.5, 2.5, -3 * math.pi / 4, collision_epsilon=0.6, t_final=30.0)
    log = run(sc)
    assert log.outcome is Outcome.COLLISION
    assert log["min_beacon_distance"][-1] < 0.6
    assert np.all(log["min_beacon_distance"][:-1] >= 0.6)
    assert log["t"][-1] == log.outcome_time


def test_decimation_keeps_terminal_sample():
    full = run(square_scenario(t_final=3.0))
    dec = run(square_scenario(t_final=3.0), decimate=7)
    np.testing.assert_array_equal(dec.samples[:-1], full.samples[::7][: len(dec) - 1])
    np.testing.assert_array_equal(dec.samples[-1], full.samples[-1])
    with pytest.raises(ValueError):
        run(square_scenario(), decimate=0)


def test_logged_v_matches_oracle(scenarios_dir):
    log = run(load_scenario(scenarios_dir / "fig1_stationary.yaml"), decimate=50)
    for row in log.samples[::5]:
        p = row[1:3]
        assert abs(row[COLUMNS.index("V")] - v1_termwise(p, SQUARE, np.ones(4), row[6:8])) <= 1e-12


def test_saturated_commands_respect_limits(scenarios_dir):
    sc = load_scenario(scenarios_dir / "fig3_saturated.yaml")
    log = run(sc)
    lim = sc.controller.limits
    assert np.all((-lim.nu_b <= log["nu"]) & (log["nu"] <= lim.nu_f))
    assert np.all((-lim.omega_r <= log["omega"]) & (log["omega"] <= lim.omega_l))
    assert np.any(np.abs(log["nu"]) == lim.nu_f)


def test_moving_scenario_tracks(scenarios_dir):
    sc = load_scenario(scenarios_dir / "fig2_moving.yaml")
    log = run(dataclasses.replace(sc, t_final=80.0), decimate=100)
    final = log.final
    assert final["tracking_error"] < 5e-2
    assert math.hypot(final["phi_x"] - 0.1, final["phi_y"] - 0.1) < 1e-2


def test_moving_beacons_with_stationary_law_noted():
    b = BeaconSet(SQUARE, np.ones(4), velocity=(0.01, 0.0))
    sc = Scenario(b, UnicycleState.from_xyt(3, 3, math.pi), StationaryController(), t_final=1.0)
    log = run(sc)
    assert any("moving beacons" in n for n in log.notes)


def test_certificate_prevents_collision():
    rng = np.random.default_rng(21)
    b = BeaconSet(SQUARE, np.ones(4))
    fw = np.zeros(2)
    done = 0
    while done < 5:
        p = rng.uniform(-2, 2, 2)
        V0 = v1(p, b, fw)
        cert = collision_certificate(V0, b, fw)
        if not cert.guaranteed:
            continue
        log = run(square_scenario(p[0], p[1], rng.uniform(-math.pi, math.pi), t_final=10.0))
        assert log.outcome is not Outcome.COLLISION
        assert log.min_distance > cert.min_dstar - cert.xi - 1e-6
        for row in log.samples[::20]:
            assert row[COLUMNS.index("V")] >= v1_lower_bound(row[1:3], b, fw) - 1e-9
        done += 1


def test_sweep_four_corners(scenarios_dir):
    base = load_scenario(scenarios_dir / "fig1_stationary.yaml")
    logs = sweep(base, load_overrides(scenarios_dir / "fig1_starts.yaml"), decimate=10)
    assert [lg.scenario.label for lg in logs] == ["corner-ne", "corner-nw", "corner-sw", "corner-se"]
    assert all(lg.outcome is Outcome.CONVERGED for lg in logs)


def test_sweep_gain_family():
    # aimed straight at the centre: off-axis headings with k_p >= k_h spiral in slowly
    base = square_scenario(3.5, 0.0, math.pi, t_final=120.0, label="kp")
    gains = [0.1, 0.5, 1.0, 2.0]
    logs = sweep(base, [{"controller": {"k_p": k}} for k in gains], decimate=100)
    assert all(lg.outcome is Outcome.CONVERGED for lg in logs)
    assert [lg.scenario.controller.gains.k_p for lg in logs] == gains
    times = [lg.convergence_time for lg in logs]
    assert all(b <= a for a, b in zip(times, times[1:]))


def test_sweep_empty_and_failures():
    base = square_scenario()
    assert sweep(base, []) == []
    out = sweep(base, [{"agent": {"x": 2.0, "y": 2.0}}, {"sim": {"t_final": 0.5}}])
    assert isinstance(out[0], Exception)
    assert out[1].outcome is Outcome.TIMEOUT


def test_sweep_parallel_matches_serial():
    base = square_scenario(t_final=3.0)
    variants = [{"agent": {"theta": th}} for th in (0.0, 1.0)]
    serial = sweep(base, variants)
    parallel = sweep(base, variants, max_workers=2)
    for a, b in zip(serial, parallel):
        assert a.samples.tobytes() == b.samples.tobytes()
