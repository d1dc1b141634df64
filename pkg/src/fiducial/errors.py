"""Exception hierarchy."""


class FiducialError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(FiducialError, ValueError):
    """Vector or matrix length does not match the model."""


class DomainError(FiducialError, ValueError):
    """Argument outside the domain of an operation."""


class ResourceError(FiducialError, ValueError):
    """Request exceeds the desk-scale guard of an exhaustive routine."""


class CompletePositivityError(FiducialError, ValueError):
    """Choi matrix of a map is not positive semidefinite."""


class GammaMembershipError(FiducialError, ValueError):
    """Transformation is not in the allowed set (e.g. trace-increasing)."""


class MembershipError(GammaMembershipError):
    """An instrument outcome transformation is not allowed."""


class CompletenessError(GammaMembershipError):
    """The summed instrument transformation is not allowed."""


class ModelError(FiducialError, ValueError):
    """State/instrument pair yields an inconsistent distribution."""


class ConfigError(FiducialError, ValueError):
    """Malformed run configuration; ``location`` names the offending field."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
