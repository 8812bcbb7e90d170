"""Exception hierarchy shared by all modules."""


class SurfaceError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(SurfaceError):
    pass


class NonFinite(SurfaceError):
    pass


class OutOfRange(SurfaceError, ValueError):
    """Target value lies outside the range of a monotone function."""


class DegenerateGradient(SurfaceError, ValueError):
    pass


class DegenerateSlope(SurfaceError, ValueError):
    """A first derivative that must be nonzero vanished."""


class DegenerateFactor(SurfaceError, ValueError):
    pass


class DegenerateTangent(SurfaceError, ValueError):
    pass


class InfeasibleModuli(SurfaceError, ValueError):
    pass


class DomainViolation(SurfaceError, ValueError):
    """An X, Y or Z profile became nonpositive on an integration path."""
