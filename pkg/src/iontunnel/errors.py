class IonTunnelError(Exception):
    """Base class for library errors."""


class DomainError(IonTunnelError, ValueError):
    """Input outside the supported domain."""


class NumericalError(IonTunnelError, ArithmeticError):
    """A numerical procedure failed to converge or produced invalid output."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConfigError(IonTunnelError):
    """Malformed or conflicting run configuration."""
