"""Exception types raised across the package."""


class LdlcError(Exception):
    """Base class for every error raised by ldlc."""


class ParamOutOfRange(LdlcError, ValueError):
    pass


class DimensionMismatch(LdlcError, ValueError):
    pass


class CapExceeded(LdlcError):
    """An exact computation would enumerate more than its configured cap."""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} exceeds cap {cap}")


class InterpolationFailure(LdlcError):
    pass


class DuplicateVariable(LdlcError, ValueError):
    pass


class MalformedDimacs(LdlcError, ValueError):
    pass


class ClauseArity(MalformedDimacs):
    pass


class NotSatisfying(LdlcError, ValueError):
    pass


class ShapeMismatch(LdlcError, ValueError):
    pass


class InvariantViolation(LdlcError, AssertionError):
    """An internal consistency check failed; this is a bug, not bad input."""
