"""Exception classes.

``InputError`` covers malformed or inconsistent user data; ``SelfTestFailure``
is raised when a computed object contradicts a proven identity, which can only
mean an engine bug or corrupted intermediate data.
"""


class InputError(ValueError):
    """Bad input: wrong dimensions, unresolved names, non-morphisms."""

    def __init__(self, message, *, block=None, line=None, column=None):
        self.block = block
        self.line = line
        self.column = column
        self.detail = message
        where = []
        if block is not None:
            where.append(f"block {block!r}")
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if where:
            message = f"{message} ({'; '.join(where)})"
        super().__init__(message)


class SelfTestFailure(AssertionError):
    """A theorem-level identity failed on computed data."""


class Rejected(Exception):
    """A well-formed request whose answer is a negative verdict.

    Raised when the requested construction does not exist for the input, for
    example the function field of a monoid that is not integral.
    """

    def __init__(self, message, *, reason=None, witness=None):
        super().__init__(message)
        self.reason = reason or message
        self.witness = witness
