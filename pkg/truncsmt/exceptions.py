from typing import Optional, Sequence, Tuple


class TruncSmtError(Exception):
    """Base class for every error raised by the library."""


class PreconditionError(TruncSmtError):
    """Input violates an operation's precondition (CLI exit code 2)."""

    exit_code = 2


class ParseError(PreconditionError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")


class DegreeMismatchError(PreconditionError):
    pass


class ArityError(PreconditionError):
    pass


class DomainError(PreconditionError):
    pass


class DegenerateCurveError(PreconditionError):
    pass


class GeneralPositionError(PreconditionError):
    def __init__(
        self,
        message: str,
        subset: Sequence[int],
        point: Optional[Tuple[str, ...]] = None,
    ):
        self.subset = tuple(subset)
        self.point = point
        super().__init__(message)


class CircleSingularityError(PreconditionError):
    def __init__(self, message: str, suggested_radius: float):
        self.suggested_radius = suggested_radius
        super().__init__(f"{message}; retry with r={suggested_radius!r}")


class NonConvergenceError(TruncSmtError):
    """Numerical procedure hit its budget (CLI exit code 3)."""

    exit_code = 3


class InternalInvariantError(TruncSmtError):
    exit_code = 1
