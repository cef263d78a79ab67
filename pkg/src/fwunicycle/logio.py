"""Trajectory CSV format.

A commented header block precedes the column row::

    # fw-unicycle log v1
    # outcome: Converged
    # outcome_time: 17.48
    # fw_point: 0.0 0.0
    ...
    # scenario:
    #   label: ...          (YAML echo of the scenario)
    t,x,y,theta,...

Floats are written with ``repr`` (shortest round-trip form) so a parsed file
reproduces the in-memory samples bit for bit.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .scenario import Scenario, dumps_scenario, loads_scenario
from .sim import COLUMNS, TrajectoryLog

MAGIC = "# fw-unicycle log v1"


class LogFormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return repr(float(x))


def format_log(log: TrajectoryLog) -> str:
    sol = log.fw_solution
    out = io.StringIO()
    out.write(MAGIC + "\n")
    out.write(f"# outcome: {log.outcome.value}\n")
    out.write(f"# outcome_time: {_fmt(log.outcome_time)}\n")
    out.write(f"# fw_point: {_fmt(sol.point[0])} {_fmt(sol.point[1])}\n")
    out.write(f"# solver_status: {sol.status.value}\n")
    out.write(f"# solver_residual: {_fmt(sol.residual)}\n")
    out.write(f"# solver_iterations: {sol.iterations}\n")
    out.write("# existence: " + ",".join("true" if ok else "false" for ok in log.existence) + "\n")
    out.write(f"# decimate: {log.decimate}\n")
    for note in log.notes:
        out.write(f"# note: {note}\n")
    out.write("# scenario:\n")
    for line in dumps_scenario(log.scenario).splitlines():
        out.write(f"#   {line}\n")
    out.write(",".join(COLUMNS) + "\n")
    for row in log.samples.tolist():
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def write_log(log: TrajectoryLog, path) -> None:
    Path(path).write_text(format_log(log))


@dataclass
class LoadedLog:
    meta: dict
    scenario: Scenario | None
    samples: np.ndarray
    notes: list[str] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return self.samples[:, COLUMNS.index(name)]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)


def parse_log(text: str) -> LoadedLog:
    lines = text.splitlines()
    if not lines or lines[0] != MAGIC:
        raise LogFormatError("missing '# fw-unicycle log v1' header")
    meta, notes, yaml_lines = {}, [], []
    i = 1
    in_scenario = False
    while i < len(lines) and lines[i].startswith("#"):
        line = lines[i]
        if in_scenario and line.startswith("#   "):
            yaml_lines.append(line[4:])
        elif line == "# scenario:":
            in_scenario = True
        else:
            key, sep, value = line[2:].partition(": ")
            if not sep:
                raise LogFormatError(f"line {i + 1}: malformed header line {line!r}")
            if key == "note":
                notes.append(value)
            else:
                meta[key] = value
        i += 1
    if i >= len(lines) or tuple(lines[i].split(",")) != COLUMNS:
        raise LogFormatError(f"line {i + 1}: expected column row {','.join(COLUMNS)}")
    rows = []
    for j, line in enumerate(lines[i + 1:], start=i + 2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != len(COLUMNS):
            raise LogFormatError(f"line {j}: expected {len(COLUMNS)} fields, got {len(fields)}")
        try:
            rows.append([float(v) for v in fields])
        except ValueError as exc:
            raise LogFormatError(f"line {j}: {exc}") from exc
    scenario = loads_scenario("\n".join(yaml_lines)) if yaml_lines else None
    samples = np.array(rows, dtype=float).reshape(-1, len(COLUMNS))
    return LoadedLog(meta, scenario, samples, notes)


def read_log(path) -> LoadedLog:
    return parse_log(Path(path).read_text())
