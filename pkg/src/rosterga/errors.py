"""Exception hierarchy shared across the package."""


class RosterError(Exception):
    """Base class for all rosterga errors."""


class ValidationError(RosterError):
    """A domain value or input violates an invariant."""


class DecodeError(ValidationError):
    """A document does not match its schema; message names the offending path."""


class ConfigError(RosterError):
    """A solver or generator configuration is unusable."""
