"""Exception hierarchy shared by every hornpol module."""


class HornpolError(Exception):
    """Base class for all errors raised by hornpol."""


class DomainError(HornpolError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(HornpolError, ValueError):
    """Invalid configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class GridFormatError(HornpolError, ValueError):
    """Malformed far-field grid file."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NumericalError(HornpolError, ArithmeticError):
    """A quantity is mathematically undefined for the given data."""
