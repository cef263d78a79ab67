"""Static figures from trajectory logs: path, tracking error and commands."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .controllers import SaturatedController  # noqa: E402
from .logio import LoadedLog  # noqa: E402

PANELS = ("trajectory", "error", "commands")


def panel_paths(output) -> list[Path]:
    out = Path(output)
    suffix = out.suffix or ".svg"
    return [out.with_name(f"{out.stem}_{name}{suffix}") for name in PANELS]


def _save(fig, path):
    # fixed salt and no timestamp keep SVG output byte-stable
    with plt.rc_context({"svg.hashsalt": "fw-unicycle", "svg.fonttype": "path"}):
        fig.savefig(path, bbox_inches="tight", metadata={"Date": None} if path.suffix == ".svg" else None)
    plt.close(fig)


def plot_trajectory(log: LoadedLog, ax):
    x, y = log["x"], log["y"]
    sc = log.scenario
    if sc is not None:
        b0 = sc.beacons.positions
        ax.scatter(b0[:, 0], b0[:, 1], marker="s", color="tab:red", label="beacons (t=0)")
        if sc.beacons.is_moving:
            b1 = sc.beacons.positions_at(float(log["t"][-1]))
            ax.scatter(b1[:, 0], b1[:, 1], marker="s", facecolors="none", edgecolors="tab:red",
                       label="beacons (end)")
    ax.plot(x, y, "-", color="tab:blue", lw=1.2, marker="." if len(x) == 1 else None, label="agent")
    ax.plot(x[:1], y[:1], "o", color="tab:blue", mfc="none")
    ax.plot(log["fw_x"], log["fw_y"], ":", color="k", lw=0.8)
    ax.plot(log["fw_x"][-1:], log["fw_y"][-1:], "*", color="k", ms=10, label="Fermat-Weber point")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="best", fontsize="small")


def plot_error(log: LoadedLog, ax):
    err = log["tracking_error"]
    ax.plot(log["t"], err, color="tab:blue", marker="." if len(err) == 1 else None)
    if np.all(err > 0):
        ax.set_yscale("log")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("tracking error [m]")
    ax.grid(True, alpha=0.3)


def plot_commands(log: LoadedLog, ax_nu, ax_om):
    t = log["t"]
    marker = "." if len(t) == 1 else None
    ax_nu.plot(t, log["nu"], color="tab:blue", marker=marker)
    ax_om.plot(t, log["omega"], color="tab:orange", marker=marker)
    ctrl = log.scenario.controller if log.scenario is not None else None
    if isinstance(ctrl, SaturatedController):
        lim = ctrl.limits
        for ax, lo, hi in ((ax_nu, -lim.nu_b, lim.nu_f), (ax_om, -lim.omega_r, lim.omega_l)):
            ax.axhline(hi, color="k", ls="--", lw=0.8)
            ax.axhline(lo, color="k", ls="--", lw=0.8)
    ax_nu.set_ylabel("linear speed [m/s]")
    ax_om.set_ylabel("angular rate [rad/s]")
    ax_om.set_xlabel("t [s]")
    for ax in (ax_nu, ax_om):
        ax.grid(True, alpha=0.3)


def plot_log(log: LoadedLog, output) -> list[Path]:
    """Write the three panels next to ``output`` and return their paths."""
    paths = panel_paths(output)
    title = log.scenario.label if log.scenario is not None else ""

    fig, ax = plt.subplots(figsize=(5, 5))
    plot_trajectory(log, ax)
    ax.set_title(title)
    _save(fig, paths[0])

    fig, ax = plt.subplots(figsize=(6, 3.5))
    plot_error(log, ax)
    ax.set_title(title)
    _save(fig, paths[1])

    fig, (ax_nu, ax_om) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    plot_commands(log, ax_nu, ax_om)
    ax_nu.set_title(title)
    _save(fig, paths[2])
    return paths
