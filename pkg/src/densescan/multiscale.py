"""Multi-scale subsignals and scanning with one extra downscaled stream.

A classifier that sees both a subsignal and a lowpass-filtered,
downsampled neighbourhood of it can be evaluated densely by downscaling the
whole signal once, sliding over both streams and upsampling the coarse
stream with zero-order hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BadConfig, IndexOutOfRange, LengthError
from .resample import BoundaryRule, downsample, pad, trim, upsample_zoh
from .signal import Kernel, Sample, Signal
from .windowed import slide


def binomial_lowpass() -> Kernel:
    """The ``(1, 2, 1) / 4`` lowpass of size 3."""
    return Kernel(3, lambda w: (w[0] + 2 * w[1] + w[2]) / 4, "binomial3")


def ms_boundary(B: int, k: int, h: int) -> tuple[int, int]:
    """``(R~, R)`` with ``R~ = (k-1)B + h - k`` and ``R = ceil(R~/2)``."""
    if k < 2:
        raise BadConfig(f"downsampling step must be at least 2, got k={k}")
    if h < k:
        raise BadConfig(f"lowpass size h={h} must be at least k={k} to avoid aliasing")
    if B < 1:
        raise BadConfig(f"receptive field must be positive, got B={B}")
    rt = (k - 1) * B + h - k
    return rt, (rt + 1) // 2


@dataclass(frozen=True)
class MultiScaleConfig:
    k: int
    H: Kernel
    theta: BoundaryRule
    B: int

    def __post_init__(self) -> None:
        ms_boundary(self.B, self.k, self.H.arity)

    @property
    def h(self) -> int:
        return self.H.arity

    @property
    def R_tilde(self) -> int:
        return ms_boundary(self.B, self.k, self.h)[0]

    @property
    def R(self) -> int:
        return ms_boundary(self.B, self.k, self.h)[1]


def padded_subsignal(xi: Sequence[Sample], d: int, R: int, theta: BoundaryRule, i: int) -> Signal:
    """Subsignal ``i`` of length ``d`` extended by ``R`` samples on both sides via ``theta``."""
    D = len(xi)
    if D < d:
        raise LengthError(f"signal of length {D} has no subsignals of length {d}")
    if not 1 <= i <= D - d + 1:
        raise IndexOutOfRange(f"subsignal index {i} outside [1, {D - d + 1}]")
    return Signal([theta(xi, i + nu - R - 1) for nu in range(1, d + 2 * R + 1)])


def ms_index(k: int, i: int) -> int:
    """Largest ``j <= i`` with ``j = 1 (mod k)``."""
    if i < 1:
        raise IndexOutOfRange(f"subsignal index must be positive, got {i}")
    return k * ((i - 1) // k) + 1


def ms_downscale(cfg: MultiScaleConfig, xi: Sequence[Sample]) -> Signal:
    """The once-downscaled signal ``pi``, of length ``ceil((D-B+1+rem(R~,2))/k) + B - 1``."""
    if len(xi) < cfg.B:
        raise LengthError(f"signal length {len(xi)} is smaller than B={cfg.B}")
    return downsample(cfg.k, slide(cfg.H, pad(cfg.R, cfg.theta, xi)))


def ms_subsignal(cfg: MultiScaleConfig, xi: Sequence[Sample], i: int) -> Signal:
    """Downscaled context of subsignal ``i``; always ``B`` samples long."""
    return downsample(cfg.k, slide(cfg.H, padded_subsignal(xi, cfg.B, cfg.R, cfg.theta, i)))


def ms_trim(cfg: MultiScaleConfig, D: int) -> int:
    """Samples trimmed from the upsampled coarse stream so it matches ``D - B + 1``."""
    parity = cfg.R_tilde % 2
    q = D - cfg.B + 1 + parity
    return parity - q % cfg.k + (0 if q % cfg.k == 0 else cfg.k)


def ms_scan_slow(
    cfg: MultiScaleConfig,
    xi: Sequence[Sample],
    g_orig: Kernel,
    g_down: Kernel,
    g: Callable[[Sample, Sample], Sample],
) -> Signal:
    """Reference: evaluate every subsignal and its downscaled context separately."""
    D, B = len(xi), cfg.B
    if D < B:
        raise LengthError(f"signal length {D} is smaller than B={B}")
    xi = tuple(xi)
    return Signal(
        [
            g(g_orig(xi[i - 1 : i - 1 + B]), g_down(tuple(ms_subsignal(cfg, xi, ms_index(cfg.k, i)))))
            for i in range(1, D - B + 2)
        ]
    )


def ms_scan(
    cfg: MultiScaleConfig,
    xi: Sequence[Sample],
    g_orig: Kernel,
    g_down: Kernel,
    g: Callable[[Sample, Sample], Sample],
) -> Signal:
    """Dense multi-scale scan computed with a single downscaling of ``xi``.

    ``g_orig`` and ``g_down`` have arity ``B``; ``g`` combines one output of
    each into the final sample.
    """
    D, B = len(xi), cfg.B
    if D < B:
        raise LengthError(f"signal length {D} is smaller than B={B}")
    if g_orig.arity != B or g_down.arity != B:
        raise BadConfig(f"both stream kernels must have arity B={B}")
    fine = slide(g_orig, xi)
    coarse = trim(ms_trim(cfg, D), upsample_zoh(cfg.k, slide(g_down, ms_downscale(cfg, xi))))
    return Signal([g(a, b) for a, b in zip(fine, coarse)])
