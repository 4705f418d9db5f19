"""Exception types shared across the package."""


class SymorbError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(SymorbError, ValueError):
    """Malformed user input: bad permutation, unknown preset, bad subset, ..."""


class ResourceLimitError(SymorbError):
    """A computation exceeded its configured size or search budget."""
