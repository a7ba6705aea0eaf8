"""Exception hierarchy shared by every module."""


class DfoError(Exception):
    """Base class for all errors raised by the library."""


class InputError(DfoError, ValueError):
    """Malformed or out-of-range input (unknown element, bad field index...)."""


class FragmentError(InputError):
    """A formula does not belong to the fragment an operation requires."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnsupportedError(InputError):
    """The requested (radius, dimension) combination has no implementation."""


class PreconditionError(DfoError):
    """An operation was called on an input violating its precondition."""
