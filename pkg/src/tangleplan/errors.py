"""Exception types shared across the planning pipeline."""


class TangleError(Exception):
    """Base class for all planner errors."""


class GeneralPositionError(TangleError):
    """Scene geometry violates the general-position requirements."""


class DegenerateContact(GeneralPositionError):
    """Two segments touch at an endpoint, overlap, or graze a vertex."""


class DegenerateAngles(GeneralPositionError):
    """Collinear edge directions where an angle test needs a strict sign."""


class TrichotomyViolation(TangleError):
    """Pair containment/crossing pattern contradicts the pair-interaction laws."""


class SharedCrossingPoint(GeneralPositionError):
    """Three or more motion paths pass through a single point."""


class UnsupportedScene(TangleError):
    """Scene is valid but uses geometry outside the supported model."""


class NonPositiveSpeed(TangleError, ValueError):
    """Robot speed must be strictly positive."""


class CyclicInput(TangleError):
    """A graph that must be acyclic still contains a cycle."""


class SimulationDegeneracy(TangleError):
    """The simulator hit an exact tie it has no convention for."""


class SimulationStall(TangleError):
    """Event cascade did not terminate; indicates a planner soundness bug."""


class ExactnessError(TangleError):
    """Internal failure of the exact arithmetic kernel."""
