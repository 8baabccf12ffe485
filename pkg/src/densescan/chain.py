"""Processing chains and their evaluation regimes.

A chain is a list of layers, each a sliding kernel ``f_j`` of arity ``c_j``
followed by a pooling kernel ``g_j`` of width ``k_j``. The regimes are

* ``eval_stride``: patch mode on exactly ``B`` samples,
* ``eval_slide``: whole-signal mode producing ``k_L*`` fragments,
* ``eval_dilate``: dilated kernels, no divisibility constraints,
* ``eval_relax``: patch-mode operators on long signals (downsampled output),
* ``eval_mixed``: relaxed up to layer ``l``, fragment-based afterwards,

plus the exactness wrappers ``exact_scan``, ``relaxed_scan``,
``shift_and_stitch`` and ``mixed_scan``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DivisibilityError, IllFormedChain, LengthError, PreconditionError
from .resample import stuff, trim
from .signal import FragmentedSignal, Kernel, Sample, Signal, identity_kernel, subsignal
from .windowed import defragment, dilate, fragment, slide, slide_fragmented, stride


@dataclass(frozen=True)
class ChainLayer:
    f: Kernel
    g: Kernel

    @property
    def c(self) -> int:
        return self.f.arity

    @property
    def k(self) -> int:
        return self.g.arity


def bypass_layer(f: Kernel) -> ChainLayer:
    """Layer without pooling (``k = 1``, identity ``g``)."""
    return ChainLayer(f, identity_kernel())


@dataclass(frozen=True)
class ProcessingChain:
    """Validated chain. Use :func:`build_chain` to construct one."""

    layers: tuple
    dummy: Sample
    B: int
    kstar: tuple  # k_0* .. k_L*
    u: tuple  # u_0 .. u_L

    @property
    def L(self) -> int:
        return len(self.layers)

    @property
    def c(self) -> tuple:
        return tuple(layer.c for layer in self.layers)

    @property
    def k(self) -> tuple:
        return tuple(layer.k for layer in self.layers)

    @property
    def kL(self) -> int:
        return self.kstar[-1]

    def with_dummy(self, dummy: Sample) -> "ProcessingChain":
        return ProcessingChain(self.layers, dummy, self.B, self.kstar, self.u)

    def with_layers(self, layers: Sequence[ChainLayer]) -> "ProcessingChain":
        """Same shape, different kernels (arity and width must match)."""
        layers = tuple(layers)
        if tuple(l.c for l in layers) != self.c or tuple(l.k for l in layers) != self.k:
            raise PreconditionError("replacement layers must keep every c_j and k_j")
        return ProcessingChain(layers, self.dummy, self.B, self.kstar, self.u)


def stride_products(k: Sequence[int]) -> tuple:
    out = [1]
    for kj in k:
        out.append(out[-1] * kj)
    return tuple(out)


def receptive_field(c: Sequence[int], k: Sequence[int]) -> int:
    """``B = k_L* + sum_mu k*_{mu-1}(c_mu - 1)``, the size that makes ``u_L = 1``."""
    ks = stride_products(k)
    return ks[-1] + sum(ks[mu] * (c[mu] - 1) for mu in range(len(c)))


def build_chain(layers: Sequence[ChainLayer], dummy: Sample, B: Optional[int] = None) -> ProcessingChain:
    """Validate the layers and derive ``B``, the stride products and the u-profile.

    A declared ``B`` is only a cross-check; the first layer whose ``u_j`` is
    not a positive integer (or ``u_L != 1``) is reported.
    """
    layers = tuple(layers)
    if not layers:
        raise IllFormedChain(0, "a chain needs at least one layer")
    c = [layer.c for layer in layers]
    k = [layer.k for layer in layers]
    ks = stride_products(k)
    derived = receptive_field(c, k)
    if B is None:
        B = derived
    u = [B]
    consumed = 0
    for j in range(1, len(layers) + 1):
        consumed += ks[j - 1] * (c[j - 1] - 1)
        q = Fraction(B - consumed, ks[j])
        if q.denominator != 1 or q < 1:
            raise IllFormedChain(j, f"u_{j} = {q} is not a positive integer (B={B})")
        u.append(int(q))
    if u[-1] != 1:
        raise IllFormedChain(len(layers), f"u_L = {u[-1]} but the chain output must be one sample (B={B}, derived {derived})")
    return ProcessingChain(layers, dummy, B, ks, tuple(u))


# ---------------------------------------------------------------- patch mode


def eval_stride(chain: ProcessingChain, rho: Sequence[Sample]) -> Signal:
    """Apply the chain to one patch of exactly ``B`` samples; the result has one sample."""
    if len(rho) != chain.B:
        raise LengthError(f"patch mode needs exactly B={chain.B} samples, got {len(rho)}")
    x = rho
    for layer in chain.layers:
        x = stride(layer.g, slide(layer.f, x))
    return x


def _require_length(chain: ProcessingChain, D: int) -> None:
    if D < chain.B:
        raise LengthError(f"signal length D={D} is smaller than the receptive field B={chain.B}")


def slide_feasible(chain: ProcessingChain, D: int) -> bool:
    return D >= chain.B and (D - chain.B + 1) % chain.kL == 0


def relax_feasible(chain: ProcessingChain, D: int) -> bool:
    return D >= chain.B and (D - chain.B) % chain.kL == 0


def mixed_feasible(chain: ProcessingChain, level: int, D: int) -> bool:
    t_num = D - chain.B + chain.kstar[level]
    return 1 <= level <= chain.L - 1 and t_num >= chain.kL and t_num % chain.kL == 0


def _require_slide(chain: ProcessingChain, D: int) -> None:
    _require_length(chain, D)
    if (D - chain.B + 1) % chain.kL:
        raise DivisibilityError(
            f"k_L*={chain.kL} does not divide D-B+1={D - chain.B + 1} (D={D}, B={chain.B})"
        )


# ---------------------------------------------------------------- stage generators
# Each yields the intermediate representation after every layer (index 0 is the input).


def slide_stages(chain: ProcessingChain, xi: Sequence[Sample]):
    _require_slide(chain, len(xi))
    chi = FragmentedSignal.from_signal(xi)
    yield chi
    for layer in chain.layers:
        chi = fragment(layer.k, slide_fragmented(layer.g, slide_fragmented(layer.f, chi)))
        yield chi


def dilate_stages(chain: ProcessingChain, xi: Sequence[Sample]):
    _require_length(chain, len(xi))
    x = Signal(xi)
    yield x
    for j, layer in enumerate(chain.layers):
        step = chain.kstar[j]
        x = dilate(layer.g, step, dilate(layer.f, step, x))
        yield x


def relax_stages(chain: ProcessingChain, xi: Sequence[Sample]):
    D = len(xi)
    _require_length(chain, D)
    if (D - chain.B) % chain.kL:
        raise DivisibilityError(f"k_L*={chain.kL} does not divide D-B={D - chain.B} (D={D}, B={chain.B})")
    x = Signal(xi)
    yield x
    for layer in chain.layers:
        x = stride(layer.g, slide(layer.f, x))
        yield x


def mixed_stages(chain: ProcessingChain, level: int, xi: Sequence[Sample]):
    D = len(xi)
    _check_level(chain, level)
    _require_length(chain, D)
    kl, kL = chain.kstar[level], chain.kL
    if (D - chain.B + kl) % kL or D - chain.B + kl < kL:
        raise DivisibilityError(
            f"mixed mode needs D = B + k_L*·t - k_l* with t >= 1; "
            f"D-B+k_l*={D - chain.B + kl} is not a positive multiple of k_L*={kL}"
        )
    x = Signal(xi)
    yield FragmentedSignal.from_signal(x)
    for layer in chain.layers[:level]:
        x = stride(layer.g, slide(layer.f, x))
        yield FragmentedSignal.from_signal(x)
    chi = FragmentedSignal.from_signal(x)
    for layer in chain.layers[level:]:
        chi = fragment(layer.k, slide_fragmented(layer.g, slide_fragmented(layer.f, chi)))
        yield chi


def _check_level(chain: ProcessingChain, level: int) -> None:
    if not 1 <= level <= chain.L - 1:
        raise PreconditionError(f"mixed level must lie in [1, L-1] = [1, {chain.L - 1}], got {level}")


def _last(gen):
    out = None
    for out in gen:
        pass
    return out


# ---------------------------------------------------------------- regimes


def eval_slide(chain: ProcessingChain, xi: Sequence[Sample]) -> FragmentedSignal:
    """Whole-signal evaluation; returns ``k_L*`` fragments of ``U_row_L`` samples.

    The output of patch ``i`` sits in row ``div(i-1, k_L*)+1``, column
    ``rem(i-1, k_L*)+1``.
    """
    return _last(slide_stages(chain, xi))


def stuffing_amount(chain: ProcessingChain, D: int) -> int:
    """Number of dummy samples ``exact_scan`` appends; always below ``k_L*``."""
    rem = (D - chain.B + 1) % chain.kL
    return 0 if rem == 0 else chain.kL - rem


def exact_scan(chain: ProcessingChain, xi: Sequence[Sample]) -> Signal:
    """Patch-mode result for every one of the ``D - B + 1`` patches, via whole-signal evaluation."""
    D = len(xi)
    _require_length(chain, D)
    r = stuffing_amount(chain, D)
    out = defragment(chain.kL, eval_slide(chain, stuff(r, chain.dummy, xi)))
    return trim(r, out.entries)


def eval_dilate(chain: ProcessingChain, xi: Sequence[Sample]) -> Signal:
    """Dilated evaluation: layer ``j`` dilates ``f_j`` and ``g_j`` by ``k*_{j-1}``."""
    return _last(dilate_stages(chain, xi))


def eval_relax(chain: ProcessingChain, xi: Sequence[Sample]) -> Signal:
    """Patch-mode operators on a long signal; yields patches ``1, k_L*+1, 2k_L*+1, ...``."""
    return _last(relax_stages(chain, xi))


def relaxed_scan(chain: ProcessingChain, xi: Sequence[Sample]) -> Signal:
    """Dense scan downsampled by ``k_L*``, computed by trimming and relaxed evaluation."""
    D = len(xi)
    _require_length(chain, D)
    if chain.kL < 2:
        raise PreconditionError("relaxed scanning needs a stride product k_L* >= 2")
    r = (D - chain.B) % chain.kL
    return eval_relax(chain, trim(r, xi))


def stitch_passes(chain: ProcessingChain, xi: Sequence[Sample]) -> list:
    """The ``k_L*`` relaxed passes over the shifted inputs of length ``D - k_L* + 1``."""
    D = len(xi)
    _require_slide(chain, D)
    d = D - chain.kL + 1
    return [eval_relax(chain, subsignal(xi, d, gamma)) for gamma in range(1, chain.kL + 1)]


def shift_and_stitch(chain: ProcessingChain, xi: Sequence[Sample]) -> Signal:
    """Interleave the relaxed passes to restore the full output resolution."""
    passes = stitch_passes(chain, xi)
    return Signal(defragment(chain.kL, FragmentedSignal.from_columns(passes)).entries)


def eval_mixed(chain: ProcessingChain, level: int, xi: Sequence[Sample]) -> FragmentedSignal:
    """Relaxed evaluation through layer ``level``, fragment-based afterwards."""
    return _last(mixed_stages(chain, level, xi))


@dataclass(frozen=True)
class MixedPlan:
    mode: str  # "trim" or "stuff"
    r: int
    count: int  # samples trimmed from the input, or stuffed onto it
    tail_trim: int


def mixed_plan(chain: ProcessingChain, level: int, D: int) -> MixedPlan:
    """Operating mode of :func:`mixed_scan` for input length ``D``."""
    _check_level(chain, level)
    _require_length(chain, D)
    kl, kL, B = chain.kstar[level], chain.kL, chain.B
    r = (D - B + kl) % kL
    if r < kl:
        return MixedPlan("trim", r, r, 0)
    rem = (D - B + 1) % kl
    s_tilde = kl if rem == 0 else rem
    s = (kL - r + s_tilde - 1) // kl
    return MixedPlan("stuff", r, kL - r, s)


def mixed_scan(chain: ProcessingChain, level: int, xi: Sequence[Sample]) -> Signal:
    """Dense scan downsampled by ``k_l*``, computed in mixed fashion."""
    plan = mixed_plan(chain, level, len(xi))
    group = chain.kL // chain.kstar[level]
    if plan.mode == "trim":
        out = eval_mixed(chain, level, trim(plan.count, xi))
        return Signal(defragment(group, out).entries)
    out = eval_mixed(chain, level, stuff(plan.count, chain.dummy, xi))
    return trim(plan.tail_trim, defragment(group, out).entries)


# ---------------------------------------------------------------- dimensions


@dataclass(frozen=True)
class DimReport:
    """Closed-form intermediate sizes; entries are tuples over ``j = 0..L``.

    A ``None`` entry is not applicable for this ``D``; the matching
    ``*_reason`` names the violated condition.
    """

    D: int
    B: int
    kstar: tuple
    u: tuple
    U_row: Optional[tuple]
    U_col: Optional[tuple]
    V: tuple
    W: Optional[tuple]
    mixed: dict = field(default_factory=dict)  # level -> ((rows...), (cols...)) or reason string
    slide_reason: str = ""
    relax_reason: str = ""


def chain_dims(chain: ProcessingChain, D: int) -> DimReport:
    _require_length(chain, D)
    ks, c, k, B, L = chain.kstar, chain.c, chain.k, chain.B, chain.L
    consumed = [0]  # sum_{mu<=j} k*_{mu-1}(c_mu - 1)
    for j in range(1, L + 1):
        consumed.append(consumed[-1] + ks[j - 1] * (c[j - 1] - 1))

    V = [D]
    for j in range(1, L + 1):
        V.append(V[-1] - ks[j - 1] * (c[j - 1] + k[j - 1] - 2))

    U_row = U_col = None
    slide_reason = ""
    if (D - B + 1) % chain.kL == 0:
        U_row = tuple((D - ks[j] + 1 - consumed[j]) // ks[j] for j in range(L + 1))
        U_col = tuple(ks)
    else:
        slide_reason = f"k_L*={chain.kL} does not divide D-B+1={D - B + 1}"

    W = None
    relax_reason = ""
    if (D - B) % chain.kL == 0:
        W = tuple((D - consumed[j]) // ks[j] for j in range(L + 1))
    else:
        relax_reason = f"k_L*={chain.kL} does not divide D-B={D - B}"

    mixed = {}
    for level in range(1, L):
        kl = ks[level]
        num = D - B + kl
        if num % chain.kL or num < chain.kL:
            mixed[level] = f"D-B+k_l*={num} is not a positive multiple of k_L*={chain.kL}"
            continue
        t = num // chain.kL
        rows, cols = [], []
        for j in range(L + 1):
            if j <= level:
                rows.append((D - consumed[j]) // ks[j])
                cols.append(1)
            else:
                rows.append((chain.kL // ks[j]) * t + chain.u[j] - 1)
                cols.append(ks[j] // kl)
        mixed[level] = (tuple(rows), tuple(cols))

    return DimReport(D, B, tuple(ks), chain.u, U_row, U_col, tuple(V), W, mixed, slide_reason, relax_reason)
