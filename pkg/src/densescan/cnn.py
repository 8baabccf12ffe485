"""Numeric kernels for CNN layers, transposed convolution and DUC.

Multi-channel samples are tuples of floats. Accumulation order inside a
convolution is fixed (input channel outer, spatial tap inner, starting
from ``0.0``) so that equalities between pipelines hold bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import ChannelMismatch, LengthError, OddFactor, PreconditionError
from .resample import channel_algebra, crop, dirichlet, pad, spread
from .signal import FragmentedSignal, Kernel, Signal
from .windowed import defragment

ChannelSample = tuple


def _reject_nan(x: float) -> float:
    if x != x:
        raise PreconditionError("NaN samples are not allowed in numeric signals")
    return x


def real_signal(values: Iterable[float]) -> Signal:
    """Scalar float signal; NaN is rejected."""
    return Signal(_reject_nan(float(v)) for v in values)


def channel_signal(samples: Iterable[Iterable[float]]) -> Signal:
    """Multi-channel float signal; every sample must have the same channel count."""
    out = [tuple(_reject_nan(float(v)) for v in s) for s in samples]
    if out and any(len(s) != len(out[0]) for s in out):
        raise ChannelMismatch("samples have different channel counts")
    return Signal(out)


@dataclass(frozen=True)
class FilterBank:
    """Weights ``w[mu][lam][kappa]`` for spatial tap, input and output channel."""

    weights: tuple

    def __post_init__(self) -> None:
        w = tuple(tuple(tuple(float(x) for x in row) for row in tap) for tap in self.weights)
        if not w or not w[0] or not w[0][0]:
            raise PreconditionError("filter bank must have positive extent in every axis")
        m, n = len(w[0]), len(w[0][0])
        for tap in w:
            if len(tap) != m or any(len(row) != n for row in tap):
                raise PreconditionError("filter bank is not fully populated")
            for row in tap:
                if not all(math.isfinite(x) for x in row):
                    raise PreconditionError("filter bank weights must be finite")
        object.__setattr__(self, "weights", w)

    @property
    def c(self) -> int:
        return len(self.weights)

    @property
    def m(self) -> int:
        return len(self.weights[0])

    @property
    def n(self) -> int:
        return len(self.weights[0][0])

    def weight(self, mu: int, lam: int, kappa: int) -> float:
        """Entry ``(w_mu)_lam`` in output channel ``kappa`` (all 1-based)."""
        return self.weights[mu - 1][lam - 1][kappa - 1]


def _check_channels(xi: Sequence[ChannelSample], m: int) -> None:
    for s in xi:
        if len(s) != m:
            raise ChannelMismatch(f"filter bank expects {m} input channels, sample has {len(s)}")


def conv(xi: Sequence[ChannelSample], w: FilterBank) -> Signal:
    """Valid multi-channel convolution: ``(xi*w)_i = sum_lam sum_mu (w_mu)_lam (xi_{c+i-mu})_lam``."""
    c, m, n = w.c, w.m, w.n
    D = len(xi)
    if D < c:
        raise LengthError(f"convolution with spatial extent {c} needs {c} samples, got {D}")
    _check_channels(xi, m)
    W = w.weights
    out = []
    for i in range(1, D - c + 2):
        sample = []
        for kappa in range(n):
            acc = 0.0
            for lam in range(m):
                for mu in range(1, c + 1):
                    acc += W[mu - 1][lam][kappa] * xi[c + i - mu - 1][lam]
            sample.append(acc)
        out.append(tuple(sample))
    return Signal(out)


def conv_kernel(w: FilterBank) -> Kernel:
    """Kernel of arity ``c`` whose sliding application is :func:`conv`."""
    c, m, n = w.c, w.m, w.n
    W = w.weights

    def f_conv(window: tuple) -> ChannelSample:
        # tap mu reads window position c - mu + 1
        out = []
        for kappa in range(n):
            acc = 0.0
            for lam in range(m):
                for mu in range(c):
                    acc += W[mu][lam][kappa] * window[c - 1 - mu][lam]
            out.append(acc)
        return tuple(out)

    return Kernel(c, f_conv, f"conv{c}x{m}->{n}")


def pointwise_kernel(phi: Callable[[float], float], m: int | None = None) -> Kernel:
    """Apply ``phi`` to every channel of a single sample."""

    def f(window: tuple) -> ChannelSample:
        x = window[0]
        if m is not None and len(x) != m:
            raise ChannelMismatch(f"expected {m} channels, got {len(x)}")
        return tuple(phi(v) for v in x)

    return Kernel(1, f, getattr(phi, "__name__", "pointwise"))


def bias_kernel(b: Sequence[float]) -> Kernel:
    """Add ``b`` channel-wise to a single sample."""
    b = tuple(float(v) for v in b)

    def f(window: tuple) -> ChannelSample:
        x = window[0]
        if len(x) != len(b):
            raise ChannelMismatch(f"bias has {len(b)} channels, sample has {len(x)}")
        return tuple(v + bv for v, bv in zip(x, b))

    return Kernel(1, f, "bias")


def relu(x: float) -> float:
    return x if x > 0.0 else 0.0


def avg_pool_kernel(k: int, m: int | None = None) -> Kernel:
    """Channel-wise mean of ``k`` samples."""

    def g(window: tuple) -> ChannelSample:
        out = []
        for ch in zip(*window):
            acc = 0.0
            for v in ch:
                acc += _reject_nan(v)
            out.append(acc / k)
        return tuple(out)

    return Kernel(k, g, f"avg{k}")


def max_pool_kernel(k: int, m: int | None = None) -> Kernel:
    """Channel-wise maximum of ``k`` samples."""

    def g(window: tuple) -> ChannelSample:
        out = []
        for ch in zip(*window):
            best = _reject_nan(ch[0])
            for v in ch[1:]:
                if _reject_nan(v) > best:
                    best = v
            out.append(best)
        return tuple(out)

    return Kernel(k, g, f"max{k}")


def transposed_min_length(c: int, k: int, P: int) -> int:
    """Smallest input length for which the transposed convolution is defined."""
    # max{1, ceil((2P - c + 1)/k + 1)}
    return max(1, -((-(2 * P - c + 1 + k)) // k))


def transposed_conv(xi: Sequence[ChannelSample], w: FilterBank, k: int, P: int) -> Signal:
    """Spread by ``k``, zero-pad by ``c - 1``, convolve with ``w``, crop ``P``.

    The output has ``k(D - 1) + c - 2P`` samples.
    """
    D = len(xi)
    need = transposed_min_length(w.c, k, P)
    if D < need:
        raise LengthError(f"transposed convolution (c={w.c}, k={k}, P={P}) needs {need} samples, got {D}")
    _check_channels(xi, w.m)
    zero = channel_algebra(w.m).zero
    full = conv(pad(w.c - 1, dirichlet(zero), spread(k, xi, channel_algebra(w.m))), w)
    return crop(P, full)


def zoh_filter_bank(u: int, m: int) -> FilterBank:
    """Bank of spatial extent ``2u`` for which transposed convolution repeats samples."""
    if u < 2 or u % 2:
        raise OddFactor(f"zero-order-hold filter bank needs an even factor u >= 2, got {u}")
    h = u // 2
    return FilterBank(
        tuple(
            tuple(tuple(1.0 if lam == kappa and 1 + h <= mu <= u + h else 0.0 for kappa in range(m)) for lam in range(m))
            for mu in range(1, 2 * u + 1)
        )
    )


def _phi(xi: Sequence[ChannelSample]) -> FragmentedSignal:
    # rows are positions, columns are channels
    return FragmentedSignal.from_rows(xi)


def _phi_inv(chi: FragmentedSignal) -> Signal:
    return Signal(chi.to_rows())


def duc(xi: Sequence[ChannelSample], w: FilterBank, u: int) -> Signal:
    """Dense upsampling convolution: unit-extent conv to ``u n`` channels, then defragment by ``u``."""
    if w.c != 1:
        raise PreconditionError(f"DUC needs a filter bank of spatial extent 1, got {w.c}")
    if u < 1 or w.n % u:
        raise ChannelMismatch(f"output channel count {w.n} is not divisible by u={u}")
    return _phi_inv(defragment(u, _phi(conv(xi, w))))


def duc_reorder(w: FilterBank) -> FilterBank:
    """Repack a bank of spatial extent ``u`` into a unit-extent bank with ``u n`` outputs."""
    u, m, n = w.c, w.m, w.n
    W = w.weights
    return FilterBank(
        (tuple(tuple(W[nu // n][lam][nu % n] for nu in range(u * n)) for lam in range(m)),)
    )
