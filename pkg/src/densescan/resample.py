"""Length-adjusting operators: stuffing, trimming, padding, cropping and resampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from .errors import LengthError, NoZeroElement
from .signal import Sample, Signal


@dataclass(frozen=True)
class BoundaryRule:
    """Total extension of sample access beyond the signal bounds.

    ``lookup(xi, nu)`` must return ``xi[nu]`` (1-based) for in-range ``nu``.
    """

    name: str
    lookup: Callable[[Sequence[Sample], int], Sample]

    def __call__(self, xi: Sequence[Sample], nu: int) -> Sample:
        return self.lookup(xi, nu)


def dirichlet(zero: Sample = 0) -> BoundaryRule:
    """First-type rule: ``zero`` outside the signal."""

    def lookup(xi: Sequence[Sample], nu: int) -> Sample:
        return xi[nu - 1] if 1 <= nu <= len(xi) else zero

    return BoundaryRule("dirichlet", lookup)


def neumann() -> BoundaryRule:
    """Second-type rule: replicate the nearest edge sample."""

    def lookup(xi: Sequence[Sample], nu: int) -> Sample:
        return xi[min(max(nu, 1), len(xi)) - 1]

    return BoundaryRule("neumann", lookup)


@dataclass(frozen=True)
class SampleAlgebra:
    """Arithmetic on a sample set, as far as the convolution family needs it."""

    zero: Optional[Sample] = None
    add: Optional[Callable[[Any, Any], Any]] = None
    mul: Optional[Callable[[Any, Any], Any]] = None
    div: Optional[Callable[[Any, Any], Any]] = None
    less: Optional[Callable[[Any, Any], bool]] = None


REALS = SampleAlgebra(
    zero=0.0,
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    div=lambda a, b: a / b,
    less=lambda a, b: a < b,
)
INTEGERS = SampleAlgebra(zero=0, add=lambda a, b: a + b, mul=lambda a, b: a * b, less=lambda a, b: a < b)


def channel_algebra(m: int) -> SampleAlgebra:
    """Algebra on ``m``-channel samples stored as float tuples."""
    return SampleAlgebra(
        zero=(0.0,) * m,
        add=lambda a, b: tuple(x + y for x, y in zip(a, b)),
        mul=lambda a, b: tuple(x * y for x, y in zip(a, b)),
    )


def stuff(r: int, zeta: Sample, xi: Sequence[Sample]) -> Signal:
    """Append ``r`` copies of the dummy sample ``zeta``."""
    if r < 0:
        raise ValueError(f"stuffing count must be non-negative, got {r}")
    return Signal(tuple(xi) + (zeta,) * r)


def trim(r: int, xi: Sequence[Sample]) -> Signal:
    """Remove the final ``r`` samples."""
    if r < 0:
        raise ValueError(f"trimming count must be non-negative, got {r}")
    if len(xi) < r + 1:
        raise LengthError(f"cannot trim {r} samples from a signal of length {len(xi)}")
    return Signal(xi[: len(xi) - r])


def pad(R: int, theta: BoundaryRule, xi: Sequence[Sample]) -> Signal:
    """Extend by ``R`` samples on both ends using ``theta``."""
    return Signal([theta(xi, nu - R) for nu in range(1, len(xi) + 2 * R + 1)])


def crop(P: int, xi: Sequence[Sample]) -> Signal:
    """Remove ``P`` samples from both ends."""
    if len(xi) < 1 + 2 * P:
        raise LengthError(f"cannot crop {P} samples from both ends of length {len(xi)}")
    return Signal(xi[P : len(xi) - P])


def downsample(k: int, xi: Sequence[Sample]) -> Signal:
    """Keep samples ``1, k+1, 2k+1, ...``; the result has ``ceil(D/k)`` samples."""
    if k < 1:
        raise ValueError(f"downsampling factor must be positive, got {k}")
    return Signal(xi[::k])


def upsample_zoh(k: int, xi: Sequence[Sample]) -> Signal:
    """Repeat every sample ``k`` times."""
    if k < 1:
        raise ValueError(f"upsampling factor must be positive, got {k}")
    return Signal([x for x in xi for _ in range(k)])


def spread(k: int, xi: Sequence[Sample], algebra: SampleAlgebra | None = REALS) -> Signal:
    """Insert ``k - 1`` zeros between neighbouring samples."""
    if algebra is None or algebra.zero is None:
        raise NoZeroElement("spreading needs a sample algebra with a zero element")
    if k < 1:
        raise ValueError(f"spreading factor must be positive, got {k}")
    zero = algebra.zero
    out = [zero] * (k * (len(xi) - 1) + 1)
    out[::k] = list(xi)
    return Signal(out)


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


__all__ = [
    "BoundaryRule",
    "SampleAlgebra",
    "REALS",
    "INTEGERS",
    "channel_algebra",
    "dirichlet",
    "neumann",
    "stuff",
    "trim",
    "pad",
    "crop",
    "downsample",
    "upsample_zoh",
    "spread",
    "ceil_div",
]
