"""Scenario records and their YAML file format.

A scenario file looks like::

    label: fig1-corner-a
    beacons:
      - {x: -2, y: 2, weight: 1}
      - {x: 2, y: 2, weight: 1}
      - {x: 2, y: -2, weight: 1}
      - {x: -2, y: -2, weight: 1}
    beacon_velocity: {x: 0, y: 0}      # optional
    agent: {x: 3, y: 3, theta: 3.14159}
    controller: {kind: stationary, k_p: 0.5, k_h: 1.0}
    sim: {dt: 0.01, t_final: 60, collision_epsilon: 0.001, convergence_tolerance: 0.01}

Unknown keys are rejected. Errors carry the key path and source line.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from .controllers import (
    ControllerKind,
    MovingBeaconController,
    MovingGains,
    SaturatedController,
    SaturationLimits,
    StationaryController,
    StationaryGains,
)
from .dynamics import UnicycleState
from .errors import CoincidentPoints, FWError, InvalidBeacons
from .geometry import DELTA_SINGULAR, BeaconSet, min_beacon_distance

DEFAULT_SIM = {"dt": 1e-2, "t_final": 60.0, "collision_epsilon": 1e-3, "convergence_tolerance": 1e-2}
CONTROLLER_KEYS = {
    "stationary": ("k_p", "k_h"),
    "saturated": ("nu_b", "nu_f", "omega_r", "omega_l"),
    "moving": ("k1", "k2", "k3", "phi0"),
}


class ScenarioError(FWError, ValueError):
    """Invalid scenario document; ``path`` locates the offending key."""

    def __init__(self, message: str, path: tuple = (), line: int | None = None):
        self.path = path
        self.line = line
        self.message = message
        where = format_path(path)
        if line is not None:
            where = f"{where} (line {line})" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


def format_path(path) -> str:
    out = ""
    for part in path:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out


@dataclass(frozen=True)
class Scenario:
    beacons: BeaconSet
    agent_initial: UnicycleState
    controller: ControllerKind = field(default_factory=StationaryController)
    dt: float = DEFAULT_SIM["dt"]
    t_final: float = DEFAULT_SIM["t_final"]
    collision_epsilon: float = DEFAULT_SIM["collision_epsilon"]
    convergence_tolerance: float = DEFAULT_SIM["convergence_tolerance"]
    label: str = "scenario"

    def __post_init__(self):
        for name in ("dt", "t_final", "collision_epsilon", "convergence_tolerance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ScenarioError(f"must be positive, got {value!r}", ("sim", name))
        if self.dt > self.t_final:
            raise ScenarioError(f"dt={self.dt} exceeds t_final={self.t_final}", ("sim", "dt"))
        if self.collision_epsilon < DELTA_SINGULAR:
            raise ScenarioError(f"must be at least {DELTA_SINGULAR}", ("sim", "collision_epsilon"))
        d = min_beacon_distance(self.agent_initial.position, self.beacons)
        if d <= self.collision_epsilon:
            raise CoincidentPoints(
                f"agent starts {d:.3g} m from a beacon (collision_epsilon={self.collision_epsilon})")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))


# --- dict <-> Scenario -------------------------------------------------------


def _number(value, path, lines, positive=False):
    if isinstance(value, str):
        # PyYAML reads exponent literals such as 1e-3 as strings
        try:
            value = float(value)
        except ValueError:
            pass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"expected a number, got {value!r}", path, lines.get(path))
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError(f"must be finite, got {value!r}", path, lines.get(path))
    if positive and value <= 0:
        raise ScenarioError(f"must be positive, got {value!r}", path, lines.get(path))
    return value


def _mapping(doc, path, lines, required=(), optional=()):
    if not isinstance(doc, Mapping):
        raise ScenarioError(f"expected a mapping, got {type(doc).__name__}", path, lines.get(path))
    allowed = set(required) | set(optional)
    for key in doc:
        if key not in allowed:
            raise ScenarioError(f"unknown key (allowed: {', '.join(sorted(allowed))})",
                                path + (key,), lines.get(path + (key,)))
    for key in required:
        if key not in doc:
            raise ScenarioError(f"missing required key '{key}'", path, lines.get(path))
    return doc


def _xy(doc, path, lines):
    _mapping(doc, path, lines, required=("x", "y"))
    return np.array([_number(doc["x"], path + ("x",), lines), _number(doc["y"], path + ("y",), lines)])


def _beacons(doc, lines):
    path = ("beacons",)
    if not isinstance(doc.get("beacons"), list):
        raise ScenarioError("expected a list of {x, y, weight}", path, lines.get(path))
    pos, w = [], []
    for i, b in enumerate(doc["beacons"]):
        bp = path + (i,)
        _mapping(b, bp, lines, required=("x", "y", "weight"))
        pos.append(_xy({"x": b["x"], "y": b["y"]}, bp, lines))
        w.append(_number(b["weight"], bp + ("weight",), lines, positive=True))
    vel = np.zeros(2)
    if "beacon_velocity" in doc:
        vel = _xy(doc["beacon_velocity"], ("beacon_velocity",), lines)
    try:
        return BeaconSet(np.array(pos).reshape(-1, 2), w, vel)
    except InvalidBeacons as exc:
        raise ScenarioError(str(exc), path, lines.get(path)) from exc


def _controller(doc, lines):
    path = ("controller",)
    _mapping(doc, path, lines, required=("kind",), optional=("k_p", "k_h", "nu_b", "nu_f", "omega_r",
                                                            "omega_l", "k1", "k2", "k3", "phi0"))
    kind = doc["kind"]
    if kind not in CONTROLLER_KEYS:
        raise ScenarioError(f"unknown controller kind {kind!r} (expected one of {sorted(CONTROLLER_KEYS)})",
                            path + ("kind",), lines.get(path + ("kind",)))
    _mapping(doc, path, lines, required=("kind",), optional=CONTROLLER_KEYS[kind])
    params = {k: _number(v, path + (k,), lines, positive=True)
              for k, v in doc.items() if k not in ("kind", "phi0")}
    if kind == "stationary":
        return StationaryController(StationaryGains(**params))
    if kind == "saturated":
        return SaturatedController(SaturationLimits(**params))
    phi0 = _xy(doc["phi0"], path + ("phi0",), lines) if "phi0" in doc else np.zeros(2)
    return MovingBeaconController(MovingGains(**params), phi0)


def scenario_from_dict(doc: Mapping[str, Any], lines: Mapping[tuple, int] | None = None) -> Scenario:
    lines = lines or {}
    _mapping(doc, (), lines, required=("beacons", "agent"),
             optional=("label", "beacon_velocity", "controller", "sim"))
    beacons = _beacons(doc, lines)
    _mapping(doc["agent"], ("agent",), lines, required=("x", "y", "theta"))
    agent = UnicycleState.from_xyt(*(_number(doc["agent"][k], ("agent", k), lines) for k in ("x", "y", "theta")))
    controller = _controller(doc.get("controller", {"kind": "stationary"}), lines)
    sim = dict(DEFAULT_SIM)
    if "sim" in doc:
        _mapping(doc["sim"], ("sim",), lines, optional=tuple(DEFAULT_SIM))
        sim.update({k: _number(v, ("sim", k), lines, positive=True) for k, v in doc["sim"].items()})
    label = doc.get("label", "scenario")
    if not isinstance(label, str) or not label:
        raise ScenarioError("label must be a non-empty string", ("label",), lines.get(("label",)))
    try:
        return Scenario(beacons, agent, controller, label=label, **sim)
    except ScenarioError as exc:
        raise ScenarioError(exc.message, exc.path, lines.get(exc.path)) from exc


def controller_to_dict(controller: ControllerKind) -> dict:
    if isinstance(controller, StationaryController):
        return {"kind": "stationary", "k_p": controller.gains.k_p, "k_h": controller.gains.k_h}
    if isinstance(controller, SaturatedController):
        lim = controller.limits
        return {"kind": "saturated", "nu_b": lim.nu_b, "nu_f": lim.nu_f,
                "omega_r": lim.omega_r, "omega_l": lim.omega_l}
    g = controller.gains
    return {"kind": "moving", "k1": g.k1, "k2": g.k2, "k3": g.k3,
            "phi0": {"x": float(controller.phi0[0]), "y": float(controller.phi0[1])}}


def scenario_to_dict(sc: Scenario) -> dict:
    b = sc.beacons
    return {
        "label": sc.label,
        "beacons": [{"x": float(p[0]), "y": float(p[1]), "weight": float(w)}
                    for p, w in zip(b.positions, b.weights)],
        "beacon_velocity": {"x": float(b.velocity[0]), "y": float(b.velocity[1])},
        "agent": {"x": sc.agent_initial.x, "y": sc.agent_initial.y, "theta": sc.agent_initial.heading},
        "controller": controller_to_dict(sc.controller),
        "sim": {"dt": sc.dt, "t_final": sc.t_final, "collision_epsilon": sc.collision_epsilon,
                "convergence_tolerance": sc.convergence_tolerance},
    }


# --- YAML with line tracking -------------------------------------------------

def load_document(text: str) -> tuple[Any, dict]:
    """Parse YAML and return ``(data, lines)`` where ``lines`` maps key paths to 1-based lines."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioError(f"malformed YAML: {getattr(exc, 'problem', exc)}",
                            line=mark.line + 1 if mark else None) from exc
    if root is None:
        raise ScenarioError("empty document")
    constructor = yaml.SafeLoader("")
    lines: dict = {}

    def build(node, path):
        lines.setdefault(path, node.start_mark.line + 1)
        if isinstance(node, yaml.MappingNode):
            out = {}
            for knode, vnode in node.value:
                key = constructor.construct_object(knode, deep=True)
                lines[path + (key,)] = knode.start_mark.line + 1
                if key in out:
                    raise ScenarioError("duplicate key", path + (key,), knode.start_mark.line + 1)
                out[key] = build(vnode, path + (key,))
            return out
        if isinstance(node, yaml.SequenceNode):
            return [build(v, path + (i,)) for i, v in enumerate(node.value)]
        return constructor.construct_object(node, deep=True)

    return build(root, ()), lines


def loads_scenario(text: str) -> Scenario:
    doc, lines = load_document(text)
    return scenario_from_dict(doc, lines)


def load_scenario(path) -> Scenario:
    return loads_scenario(Path(path).read_text())


def load_beacons(path) -> BeaconSet:
    """Read only the beacon part of a scenario or beacon-list file."""
    doc, lines = load_document(Path(path).read_text())
    _mapping(doc, (), lines, required=("beacons",),
             optional=("label", "beacon_velocity", "agent", "controller", "sim"))
    return _beacons(doc, lines)


def dumps_scenario(sc: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(sc), sort_keys=False, default_flow_style=None)


# --- overrides ---------------------------------------------------------------

def merge(base: Mapping, override: Mapping) -> dict:
    """Recursive dict merge; lists and scalars in ``override`` replace wholesale."""
    out = copy.deepcopy(dict(base))
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), Mapping):
            # switching controller kind must not inherit the old gains
            if key == "controller" and "kind" in value and value["kind"] != out[key].get("kind"):
                out[key] = copy.deepcopy(dict(value))
            else:
                out[key] = merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def apply_override(base: Scenario, override: Mapping, index: int = 0) -> Scenario:
    doc = merge(scenario_to_dict(base), override)
    if "label" not in override:
        doc["label"] = f"{base.label}-{index}"
    return scenario_from_dict(doc)


def load_overrides(path) -> list[dict]:
    text = Path(path).read_text()
    if not text.strip():
        return []
    doc, _ = load_document(text)
    if not isinstance(doc, list) or not all(isinstance(d, Mapping) for d in doc):
        raise ScenarioError("overrides file must be a list of mappings", line=1)
    return doc
