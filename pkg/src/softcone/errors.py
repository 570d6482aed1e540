"""Exception types shared across the package."""


class SoftconeError(Exception):
    """Base class for all package-specific errors."""


class AxisSingularity(SoftconeError):
    """A polarisation-frame evaluation was requested on (or too close to)
    the k3-axis, where the frame convention is singular."""


class PointSingularity(SoftconeError):
    """A dressing profile was evaluated at k = 0, where it diverges."""


class NonIntegrablePairing(SoftconeError):
    """Small-momentum exponent metadata rules out absolute integrability
    of a requested pairing."""


class SupportNotInForwardCone(SoftconeError):
    """A test field declared for a forward-cone computation is not
    contained in the open forward lightcone."""


class ToleranceNotMet(SoftconeError):
    """A quadrature refinement stalled above its accuracy target."""
