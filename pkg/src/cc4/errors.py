"""Exception types raised across the package."""


class CentralConfigError(Exception):
    """Base class for every error raised by cc4."""


class CollisionError(CentralConfigError):
    """Two bodies (or two angles on a circle) coincide."""


class DegenerateError(CentralConfigError):
    """The configuration is too degenerate for the requested quantity."""


class SingularityError(CentralConfigError):
    """A field was evaluated at one of its source points."""


class NoConvergenceError(CentralConfigError):
    pass


class NoRootError(CentralConfigError):
    """A bracket expansion failed to find a sign change."""


class InvalidMassError(CentralConfigError, ValueError):
    pass


class FlatTriangleError(CentralConfigError):
    """Three lengths do not satisfy the strict triangle inequalities."""


class NotATrapezoidError(CentralConfigError):
    pass


class CollinearError(CentralConfigError):
    pass


class NotCocircularError(CentralConfigError):
    pass


class StepFailureError(CentralConfigError):
    """The adaptive integrator could not take a step."""
