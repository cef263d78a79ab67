"""Bearing-only guidance of a unicycle to the Fermat-Weber point of weighted beacons."""

from .controllers import (
    CompensatorState,
    MovingBeaconController,
    MovingGains,
    SaturatedController,
    SaturationLimits,
    StationaryController,
    StationaryGains,
)
from .dynamics import ControlCommand, UnicycleState
from .errors import (
    CoincidentPoints,
    FWError,
    InvalidBeacons,
    NotPositiveDefinite,
    NotUnit,
    SolverFailed,
    ZeroTargetVelocity,
)
from .fwlp import FwSolution, SolveStatus, weiszfeld
from .geometry import BeaconSet
from .scenario import Scenario, load_scenario
from .sim import Outcome, TrajectoryLog, run, sweep

__version__ = "0.1.0"
