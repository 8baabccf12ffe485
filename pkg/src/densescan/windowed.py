"""Sliding, strided, dilated and fragment-wise kernel application."""

from __future__ import annotations

from typing import Sequence

from .errors import DivisibilityError, IndexOutOfRange, LengthError
from .signal import FragmentedSignal, Kernel, Sample, Signal


def slide(f: Kernel, xi: Sequence[Sample]) -> Signal:
    """Apply ``f`` to every window of ``f.arity`` consecutive samples."""
    c = f.arity
    n = len(xi) - c + 1
    if n < 1:
        raise LengthError(f"sliding a kernel of arity {c} needs at least {c} samples, got {len(xi)}")
    xi = tuple(xi)
    fn = f.fn
    return Signal([fn(xi[i : i + c]) for i in range(n)])


def stride(g: Kernel, xi: Sequence[Sample]) -> Signal:
    """Apply ``g`` to non-overlapping blocks of ``g.arity`` samples."""
    k = g.arity
    D = len(xi)
    if D % k:
        raise DivisibilityError(f"stride k={k} does not divide the signal length D={D}")
    xi = tuple(xi)
    fn = g.fn
    return Signal([fn(xi[i : i + k]) for i in range(0, D, k)])


def dilated_subsignal(xi: Sequence[Sample], d: int, k: int, i: int) -> Signal:
    """Samples ``xi[i], xi[i+k], ..., xi[i+k(d-1)]`` (1-based)."""
    D = len(xi)
    span = k * (d - 1)
    if d < 1 or k < 1 or D < span + 1:
        raise LengthError(f"signal of length {D} too short for d={d}, k={k}")
    if not 1 <= i <= D - span:
        raise IndexOutOfRange(f"dilated subsignal index {i} outside [1, {D - span}]")
    return Signal(xi[i - 1 : i + span : k])


def dilate(f: Kernel, k: int, xi: Sequence[Sample]) -> Signal:
    """Apply ``f`` to windows whose taps are ``k`` samples apart."""
    c = f.arity
    span = k * (c - 1)
    n = len(xi) - span
    if k < 1 or n < 1:
        raise LengthError(f"dilating arity {c} by k={k} needs {span + 1} samples, got {len(xi)}")
    xi = tuple(xi)
    fn = f.fn
    return Signal([fn(xi[i : i + span + 1 : k]) for i in range(n)])


def fragment(k: int, chi: FragmentedSignal | Sequence[Sample]) -> FragmentedSignal:
    """Split every fragment into ``k`` polyphase components.

    A ``q x s`` matrix becomes ``q/k x ks``. Entry ``(mu, nu)`` of the result
    is entry ``(div(t, s)+1, rem(t, s)+1)`` of the input with
    ``t = (mu-1)ks + nu - 1``, which is the same row-major position, so the
    operation is a reshape of the row-major buffer.
    """
    if not isinstance(chi, FragmentedSignal):
        chi = FragmentedSignal.from_signal(chi)
    q, s = chi.shape
    if k < 1 or q % k:
        raise DivisibilityError(f"fragmentation k={k} does not divide the fragment length {q}")
    return FragmentedSignal(q // k, k * s, chi.entries)


def defragment(k: int, chi: FragmentedSignal) -> FragmentedSignal:
    """Inverse of :func:`fragment`: merge groups of ``k`` fragments."""
    q, s = chi.shape
    if k < 1 or s % k:
        raise DivisibilityError(f"defragmentation k={k} does not divide the fragment count {s}")
    return FragmentedSignal(q * k, s // k, chi.entries)


def _map_columns(op, chi: FragmentedSignal) -> FragmentedSignal:
    s = chi.cols
    cols = [op(chi.entries[g::s]) for g in range(s)]
    return FragmentedSignal.from_columns(cols)


def slide_fragmented(f: Kernel, chi: FragmentedSignal) -> FragmentedSignal:
    """Slide ``f`` over every fragment independently."""
    if chi.rows < f.arity:
        raise LengthError(
            f"sliding a kernel of arity {f.arity} needs fragments of length {f.arity}, got {chi.rows}"
        )
    return _map_columns(lambda col: slide(f, col), chi)
