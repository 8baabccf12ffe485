"""Kernel invocation counts and closed-form speedup ratios.

Counts come from counting adapters wrapped around the chain's kernels, so
fragmentation and other reordering work is never counted. Ratios are
``fractions.Fraction`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .chain import (
    ChainLayer,
    ProcessingChain,
    chain_dims,
    eval_dilate,
    eval_mixed,
    eval_relax,
    eval_slide,
    eval_stride,
    slide_feasible,
    stitch_passes,
)
from .errors import DivisibilityError, PreconditionError
from .signal import Kernel, Sample, Signal, subsignal

REGIMES = ("stride", "slide", "dilate", "relax", "stitch", "mixed")


class _Tally:
    """Per-evaluation counters, one slot per layer and kernel role."""

    def __init__(self, L: int) -> None:
        self.f = [0] * L
        self.g = [0] * L


def _counting(kernel: Kernel, slots: list, j: int) -> Kernel:
    fn = kernel.fn

    def counted(window: tuple) -> Sample:
        slots[j] += 1
        return fn(window)

    return Kernel(kernel.arity, counted, kernel.name)


def counting_chain(chain: ProcessingChain) -> tuple[ProcessingChain, _Tally]:
    """Copy of ``chain`` whose kernels count their invocations."""
    tally = _Tally(chain.L)
    layers = [
        ChainLayer(_counting(layer.f, tally.f, j), _counting(layer.g, tally.g, j))
        for j, layer in enumerate(chain.layers)
    ]
    return chain.with_layers(layers), tally


@dataclass(frozen=True)
class EvalCounts:
    regime: str
    D: int
    f_measured: tuple
    g_measured: tuple
    f_predicted: tuple
    g_predicted: tuple
    level: Optional[int] = None

    @property
    def agrees(self) -> bool:
        return self.f_measured == self.f_predicted and self.g_measured == self.g_predicted


def predicted_counts(regime: str, chain: ProcessingChain, D: int, level: Optional[int] = None) -> tuple:
    """Closed-form ``(f_counts, g_counts)`` per layer."""
    c, k, ks, L = chain.c, chain.k, chain.kstar, chain.L
    dims = chain_dims(chain, D)
    if regime == "stride":
        n = D - chain.B + 1
        u = chain.u
        return (
            tuple(n * (u[j - 1] - c[j - 1] + 1) for j in range(1, L + 1)),
            tuple(n * u[j] for j in range(1, L + 1)),
        )
    if regime == "slide":
        if dims.U_row is None:
            raise DivisibilityError(dims.slide_reason)
        R, C = dims.U_row, dims.U_col
        return (
            tuple(C[j - 1] * (R[j - 1] - c[j - 1] + 1) for j in range(1, L + 1)),
            tuple(C[j - 1] * k[j - 1] * R[j] for j in range(1, L + 1)),
        )
    if regime == "dilate":
        V = dims.V
        return (
            tuple(V[j - 1] - ks[j - 1] * (c[j - 1] - 1) for j in range(1, L + 1)),
            tuple(V[j] for j in range(1, L + 1)),
        )
    if regime == "relax":
        if dims.W is None:
            raise DivisibilityError(dims.relax_reason)
        W = dims.W
        return (
            tuple(W[j - 1] - c[j - 1] + 1 for j in range(1, L + 1)),
            tuple(W[j] for j in range(1, L + 1)),
        )
    if regime == "stitch":
        if dims.U_row is None:
            raise DivisibilityError(dims.slide_reason)
        f, g = predicted_counts("relax", chain, D - chain.kL + 1)
        return tuple(chain.kL * x for x in f), tuple(chain.kL * x for x in g)
    if regime == "mixed":
        entry = dims.mixed.get(level)
        if entry is None:
            raise PreconditionError(f"mixed level must lie in [1, {L - 1}], got {level}")
        if isinstance(entry, str):
            raise DivisibilityError(entry)
        R, C = entry
        return (
            tuple(C[j - 1] * (R[j - 1] - c[j - 1] + 1) for j in range(1, L + 1)),
            tuple(C[j - 1] * k[j - 1] * R[j] if j > level else R[j] for j in range(1, L + 1)),
        )
    raise ValueError(f"unknown regime {regime!r}")


def count_eval(
    regime: str,
    chain: ProcessingChain,
    D: int,
    level: Optional[int] = None,
    signal: Optional[Sequence[Sample]] = None,
) -> EvalCounts:
    """Run ``regime`` on a length-``D`` signal with counting kernels.

    Without an explicit ``signal`` the chain's dummy sample is repeated;
    counts do not depend on sample values.
    """
    f_pred, g_pred = predicted_counts(regime, chain, D, level)
    xi = Signal(signal) if signal is not None else Signal((chain.dummy,) * D)
    if len(xi) != D:
        raise PreconditionError(f"signal has length {len(xi)}, expected {D}")
    counted, tally = counting_chain(chain)
    if regime == "stride":
        for i in range(1, D - chain.B + 2):
            eval_stride(counted, subsignal(xi, chain.B, i))
    elif regime == "slide":
        eval_slide(counted, xi)
    elif regime == "dilate":
        eval_dilate(counted, xi)
    elif regime == "relax":
        eval_relax(counted, xi)
    elif regime == "stitch":
        stitch_passes(counted, xi)
    elif regime == "mixed":
        eval_mixed(counted, level, xi)
    return EvalCounts(regime, D, tuple(tally.f), tuple(tally.g), f_pred, g_pred, level)


def _require_slide(chain: ProcessingChain, D: int) -> None:
    if not slide_feasible(chain, D):
        raise DivisibilityError(
            f"k_L*={chain.kL} does not divide D-B+1={D - chain.B + 1} (D={D}, B={chain.B})"
        )


def _check_layer(chain: ProcessingChain, j: int, which: str) -> None:
    if not 1 <= j <= chain.L:
        raise PreconditionError(f"layer must lie in [1, {chain.L}], got {j}")
    if which not in ("f", "g"):
        raise ValueError(f"which must be 'f' or 'g', got {which!r}")


def speedup(chain: ProcessingChain, D: int, j: int, which: str) -> Fraction:
    """Stride-over-slide evaluation ratio for layer ``j``."""
    _check_layer(chain, j, which)
    _require_slide(chain, D)
    dims = chain_dims(chain, D)
    u, R, c = chain.u, dims.U_row, chain.c[j - 1]
    if which == "f":
        return 1 + Fraction((R[j - 1] - u[j - 1]) * (u[j - 1] - c), R[j - 1] - c + 1)
    return 1 + Fraction((R[j] - u[j]) * (u[j] - 1), R[j])


def speedup_limit(chain: ProcessingChain, j: int, which: str) -> int:
    """Value that :func:`speedup` approaches as ``D`` grows."""
    _check_layer(chain, j, which)
    if which == "f":
        return chain.u[j - 1] - chain.c[j - 1] + 1
    return chain.u[j]


def speedup_relax(chain: ProcessingChain, D: int, j: int, which: str, passes: str = "full") -> Fraction:
    """Shift-and-stitch over slide evaluation ratio; ``passes="one"`` divides by ``k_L*``."""
    _check_layer(chain, j, which)
    _require_slide(chain, D)
    R = chain_dims(chain, D).U_row
    kL, ks = chain.kL, chain.kstar
    if which == "f":
        a = Fraction(kL, ks[j - 1])
        s = a * (1 - (a - 1) / (R[j - 1] - chain.c[j - 1] + 1))
    else:
        a = Fraction(kL, ks[j])
        s = a * (1 - (a - 1) / R[j])
    if passes == "full":
        return s
    if passes == "one":
        return s / kL
    raise ValueError(f"passes must be 'full' or 'one', got {passes!r}")


def speedup_relax_limit(chain: ProcessingChain, j: int, which: str, passes: str = "full") -> Fraction:
    _check_layer(chain, j, which)
    denom = chain.kstar[j - 1] if which == "f" else chain.kstar[j]
    return Fraction(chain.kL if passes == "full" else 1, denom)


def measured_ratio(num: EvalCounts, den: EvalCounts, j: int, which: str) -> Fraction:
    a = num.f_measured if which == "f" else num.g_measured
    b = den.f_measured if which == "f" else den.g_measured
    return Fraction(a[j - 1], b[j - 1])


@dataclass(frozen=True)
class SpeedupRow:
    D: int
    layer: int
    regime: str
    f_measured: int
    f_predicted: int
    g_measured: int
    g_predicted: int
    S_f: Optional[Fraction]
    S_g: Optional[Fraction]
    limit_f: int
    limit_g: int
    monotone_f: bool = True
    monotone_g: bool = True


def emit_report(chain: ProcessingChain, d_from: int, d_to: int, d_step: int = 1) -> list:
    """One row per ``(D, layer, regime)`` for every regime feasible at ``D``.

    ``S_f`` and ``S_g`` are the stride-over-slide ratios (present when the
    slide regime is feasible). The monotone flags compare against the last
    feasible row of the same layer and regime.
    """
    if d_step < 1:
        raise ValueError("D step must be positive")
    rows = []
    last: dict = {}
    for D in range(max(d_from, chain.B), d_to + 1, d_step):
        counts = [count_eval("stride", chain, D), count_eval("dilate", chain, D)]
        if slide_feasible(chain, D):
            counts.insert(1, count_eval("slide", chain, D))
            counts.append(count_eval("stitch", chain, D))
        if (D - chain.B) % chain.kL == 0:
            counts.append(count_eval("relax", chain, D))
        for ec in counts:
            for j in range(1, chain.L + 1):
                sf = sg = None
                if slide_feasible(chain, D):
                    sf, sg = speedup(chain, D, j, "f"), speedup(chain, D, j, "g")
                key = (ec.regime, j)
                prev = last.get(key)
                mono_f = mono_g = True
                if sf is not None and prev is not None:
                    mono_f, mono_g = sf >= prev[0], sg >= prev[1]
                if sf is not None:
                    last[key] = (sf, sg)
                rows.append(
                    SpeedupRow(
                        D, j, ec.regime,
                        ec.f_measured[j - 1], ec.f_predicted[j - 1],
                        ec.g_measured[j - 1], ec.g_predicted[j - 1],
                        sf, sg,
                        speedup_limit(chain, j, "f"), speedup_limit(chain, j, "g"),
                        mono_f, mono_g,
                    )
                )
    return rows
