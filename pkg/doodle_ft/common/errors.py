"""Provides the exception hierarchy of the doodle library."""


class DoodleError(ValueError):
    """Base class for every error raised on invalid input or misuse."""


class GaussCodeError(DoodleError):
    """A Gauss code token is malformed or a chord is not paired correctly."""


class SignedCodeError(DoodleError):
    """A signed linear diagram is malformed."""


class BasepointError(DoodleError):
    """A basepoint lies outside the endpoint range of a diagram."""


class StaleSiteError(DoodleError):
    """A move site does not belong to the diagram it is applied to."""


class SlotError(DoodleError):
    """An insertion slot lies outside 0..2n."""


class PreconditionError(DoodleError):
    """An operation was called on an input it is not defined for."""


class TangleError(DoodleError):
    """A tangle or singular site is malformed or not resolvable."""


class CensusLimitError(DoodleError):
    """The requested census is above the guarded chord bound."""


class CensusBudgetExceeded(DoodleError):
    """The census hit its diagram budget; partial progress was checkpointed."""

    def __init__(self, message: str, *, checkpoint: object | None = None) -> None:
        super().__init__(message)
        self.checkpoint = checkpoint


class InvariantSizeError(DoodleError):
    """The diagram has more chords than the exact invariant accepts."""
