"""Exception hierarchy shared by all toolkit modules."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class InputError(ToolkitError):
    """Raised when operation inputs violate a documented precondition."""


class ConfigError(ToolkitError):
    """Raised when a configuration object violates its invariants."""


class VerificationError(ToolkitError):
    """Raised when a self-check exceeds its tolerance (CLI exit code 2)."""
