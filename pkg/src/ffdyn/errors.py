"""Exception types shared across the package.

The CLI maps each family to an exit code: parse/input errors -> 2,
precondition violations -> 3, cap overflows -> 4.
"""


class FFDynError(Exception):
    """Base class for all package errors."""


class ParseError(FFDynError, ValueError):
    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class MapError(FFDynError, ValueError):
    """Raised when coefficients do not define a reduced rational map."""


class PreconditionError(FFDynError, ValueError):
    pass


class CapExceededError(FFDynError, RuntimeError):
    pass
