"""Shared exception types."""


class InputError(ValueError):
    """Malformed or contract-violating input."""


class ResourceLimitError(RuntimeError):
    """A configured size bound would be exceeded."""
