"""Exception types shared across the package.

Every error carries a short diagnostic ``code`` that the CLI prints next to
the message, so scripted callers can tell failure kinds apart.
"""


class FaradayJamError(Exception):
    code = "E000"


class DomainError(FaradayJamError, ValueError):
    """An input lies outside the domain of a physical formula."""

    code = "D001"


class NoAttackRequired(DomainError):
    """The experiment already sits at or below the security threshold."""

    code = "D002"


class NoCountermeasure(DomainError):
    """A quantity was requested that only exists for an active countermeasure."""

    code = "D003"


class ConfigError(FaradayJamError):
    code = "C001"


class UnknownPresetError(ConfigError):
    code = "C002"
