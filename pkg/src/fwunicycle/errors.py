"""Exception types shared across the package."""


class FWError(Exception):
    """Base class for all package errors."""


class CoincidentPoints(FWError, ValueError):
    """Two points are too close for a bearing to be defined."""


class NotUnit(FWError, ValueError):
    """A vector that must have unit norm does not."""


class InvalidBeacons(FWError, ValueError):
    """Beacon data violates a BeaconSet invariant."""


class NotPositiveDefinite(FWError, ValueError):
    pass


class ZeroTargetVelocity(FWError, ValueError):
    """The moving-beacon certificate needs a nonzero beacon velocity."""


class SolverFailed(FWError, RuntimeError):
    """The Fermat-Weber solve did not produce an interior point."""
