"""Exception hierarchy shared by every module."""

from __future__ import annotations


class DenseScanError(Exception):
    """Base class for all library errors."""


class PreconditionError(DenseScanError, ValueError):
    """An operator was called outside its domain."""


class LengthError(PreconditionError):
    """A signal is too short (or has the wrong length) for the operator."""


class IndexOutOfRange(PreconditionError, IndexError):
    """A 1-based index lies outside the feasible range."""


class DivisibilityError(PreconditionError):
    """A required divisibility relation between lengths does not hold."""


class ShapeError(PreconditionError):
    """Matrix dimensions are inconsistent with the requested reshape."""


class ChannelMismatch(PreconditionError):
    """Channel counts of a signal and a filter bank disagree."""


class OddFactor(PreconditionError):
    """The zero-order-hold filter bank needs an even upsampling factor."""


class NoZeroElement(PreconditionError):
    """The sample algebra does not designate a zero element."""


class IllFormedChain(PreconditionError):
    """Layer parameters do not yield a positive integral u-profile."""

    def __init__(self, layer: int, message: str) -> None:
        super().__init__(f"layer {layer}: {message}")
        self.layer = layer


class BadConfig(PreconditionError):
    """Invalid multi-scale or chain configuration."""


class ParseError(DenseScanError, ValueError):
    """A file or document could not be parsed."""
