"""Exception hierarchy.

Input problems subclass ValueError so callers that don't care about the
distinction can catch the usual thing.  Cap exhaustion is a separate branch:
it can carry partial results and is not a caller mistake.
"""


class LookKnaveError(Exception):
    """Base class for everything raised by this package."""


class InputError(LookKnaveError, ValueError):
    """A caller-supplied value violated an operation's precondition."""


class EmptyInputError(InputError):
    pass


class NonBinaryCharacterError(InputError):
    """A character other than 0/1 in a bit string; position is 1-based."""

    def __init__(self, position, char=None):
        self.position = position
        self.char = char
        detail = f" ({char!r})" if char is not None else ""
        super().__init__(f"non-binary character at position {position}{detail}")


class NonBinarySymbolError(InputError):
    """A streaming source yielded something other than the integers 0 and 1."""


class NonDigitError(InputError):
    """A character other than 0-9 in a decimal string; position is 1-based."""

    def __init__(self, position, char=None):
        self.position = position
        self.char = char
        detail = f" ({char!r})" if char is not None else ""
        super().__init__(f"non-digit character at position {position}{detail}")


class ZeroOrNegativeError(InputError):
    """Numerals exist for positive integers only."""


class OutOfRangeError(InputError):
    """A position argument fell outside the string it indexes."""


class RunTooLongError(InputError):
    """Decimal look-say is ambiguous once a run needs a multi-digit count."""


class InsufficientDataError(InputError):
    """Too few data points to fit."""


class CapExceededError(LookKnaveError):
    """A configured resource cap stopped an iteration."""


class IterationCapExceededError(CapExceededError):
    """Iteration budget exhausted; carries the partial certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class MemoryCapExceededError(CapExceededError):
    """A term would have exceeded the bit cap."""
