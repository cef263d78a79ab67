"""Command-line front end.

Exit status:

* ``run``: 0 converged, 2 timeout, 3 collision, 1 input error.
* ``sweep``: 0 when every variant ran, 1 if any variant (or the input) failed.
* ``verify``: 0 when the solution checks out, 4 when it does not, 1 input error.
* ``plot``: 0 on success, 1 on a malformed log.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
from pathlib import Path

import numpy as np

from . import fwlp
from .errors import FWError
from .logio import LogFormatError, read_log, write_log
from .scenario import load_beacons, load_overrides, load_scenario
from .sim import Outcome, run, sweep

EXIT_OK, EXIT_INPUT, EXIT_TIMEOUT, EXIT_COLLISION, EXIT_VERIFY = 0, 1, 2, 3, 4
OUTCOME_EXIT = {Outcome.CONVERGED: EXIT_OK, Outcome.TIMEOUT: EXIT_TIMEOUT, Outcome.COLLISION: EXIT_COLLISION}
GRID_TOL = 2e-3
SUMMARY_COLUMNS = ("label", "outcome", "convergence_time", "final_error", "min_distance")


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def cmd_run(scenario_path, output_path, decimate: int = 1) -> int:
    try:
        scenario = load_scenario(scenario_path)
        log = run(scenario, decimate=decimate)
    except (FWError, OSError, ValueError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    write_log(log, output_path)
    print(f"{scenario.label}: {log.outcome.value} at t={log.outcome_time:g} s, "
          f"final error {log.final_error:.3e} m -> {output_path}")
    return OUTCOME_EXIT[log.outcome]


def _safe(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label)


def cmd_sweep(scenario_path, overrides_path, output_dir, decimate: int = 1, workers: int | None = None) -> int:
    try:
        base = load_scenario(scenario_path)
        overrides = load_overrides(overrides_path)
    except (FWError, OSError, ValueError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = sweep(base, overrides, decimate=decimate, max_workers=workers)
    status = EXIT_OK
    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for i, (override, res) in enumerate(zip(overrides, results)):
            label = override.get("label", f"{base.label}-{i}")
            if isinstance(res, Exception):
                status = EXIT_INPUT
                _err(f"variant {i} ({label}): {type(res).__name__}: {res}")
                writer.writerow([label, f"Error: {type(res).__name__}: {res}", "", "", ""])
                continue
            write_log(res, out / f"{i:02d}-{_safe(res.scenario.label)}.csv")
            tc = res.convergence_time
            writer.writerow([res.scenario.label, res.outcome.value, "" if tc is None else repr(tc),
                             repr(res.final_error), repr(res.min_distance)])
    print(f"{len(results)} variants -> {out}")
    return status


def cmd_verify(beacons_path, tol: float = fwlp.DEFAULT_TOL) -> int:
    try:
        beacons = load_beacons(beacons_path)
    except (FWError, OSError, ValueError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    existence = fwlp.existence_check(beacons)
    sol = fwlp.weiszfeld(beacons, tol=tol)
    grid = fwlp.grid_minimizer(beacons)
    gap = float(np.hypot(*(sol.point - grid)))
    print("existence: " + " ".join("true" if ok else "false" for ok in existence))
    print(f"status: {sol.status.value}")
    if sol.beacon_index is not None:
        print(f"optimal beacon: {sol.beacon_index}")
    print(f"point: {float(sol.point[0])!r} {float(sol.point[1])!r}")
    print(f"iterations: {sol.iterations}")
    print(f"residual: {sol.residual:.3e}")
    print(f"grid point: {float(grid[0])!r} {float(grid[1])!r}")
    print(f"grid discrepancy: {gap:.3e}")
    ok = sol.status is not fwlp.SolveStatus.MAX_ITERATIONS and sol.residual <= tol and gap <= GRID_TOL
    print("verdict: " + ("ok" if ok else "FAILED"))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_plot(csv_path, output_image_path) -> int:
    from .plotting import plot_log

    try:
        log = read_log(csv_path)
    except (LogFormatError, FWError, OSError, ValueError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    if len(log.samples) == 0:
        _err("log has no samples")
        return EXIT_INPUT
    for p in plot_log(log, output_image_path):
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fwunicycle",
                                     description="Bearing-only Fermat-Weber guidance for a unicycle.")
    parser.add_argument("--seed", type=int, default=None, help="reserved; currently unused")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario and write a trajectory CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--decimate", type=int, default=1)

    p = sub.add_parser("sweep", help="run a base scenario under a list of overrides")
    p.add_argument("--scenario", required=True)
    p.add_argument("--overrides", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--decimate", type=int, default=1)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("verify", help="check the Fermat-Weber solution of a beacon set")
    p.add_argument("--scenario", required=True, help="scenario or beacon-list file")
    p.add_argument("--tol", type=float, default=fwlp.DEFAULT_TOL)

    p = sub.add_parser("plot", help="render trajectory, error and command panels")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "decimate", 1) < 1:
        _err("--decimate must be >= 1")
        return EXIT_INPUT
    if args.command == "run":
        return cmd_run(args.scenario, args.out, args.decimate)
    if args.command == "sweep":
        return cmd_sweep(args.scenario, args.overrides, args.out_dir, args.decimate, args.workers)
    if args.command == "verify":
        return cmd_verify(args.scenario, args.tol)
    return cmd_plot(args.csv, args.out)


if __name__ == "__main__":
    sys.exit(main())
