"""Exception types shared across the package.

Two failure families matter to callers: malformed input data and
violated mathematical preconditions.  The CLI maps them to distinct
exit codes (2 and 3 respectively).
"""

__all__ = ["InputFormatError", "PreconditionError"]


class InputFormatError(ValueError):
    """Malformed input: bad JSON shape, unknown name, invalid flag value."""


class PreconditionError(ValueError):
    """A mathematical precondition failed: non-Hermitian input, singular
    reference state, parameter outside a family's range, and so on."""
