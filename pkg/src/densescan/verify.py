"""Seeded randomized verification of every equivalence the library relies on.

Each suite compares a fast evaluation path against a brute-force oracle.
Floats are compared by bit pattern, so ``0.0`` and ``-0.0`` differ.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

from .chain import (
    ChainLayer,
    ProcessingChain,
    build_chain,
    chain_dims,
    dilate_stages,
    eval_stride,
    exact_scan,
    mixed_plan,
    mixed_scan,
    mixed_stages,
    relax_stages,
    relaxed_scan,
    shift_and_stitch,
    slide_feasible,
    slide_stages,
    stitch_passes,
    stuffing_amount,
)
from .cnn import (
    FilterBank,
    channel_signal,
    conv,
    conv_kernel,
    duc,
    duc_reorder,
    transposed_conv,
    transposed_min_length,
    zoh_filter_bank,
)
from .complexity import counting_chain, predicted_counts, speedup, speedup_relax
from .multiscale import (
    MultiScaleConfig,
    ms_downscale,
    ms_index,
    ms_scan,
    ms_scan_slow,
    ms_subsignal,
    padded_subsignal,
)
from .planar2d import Image, Kernel2D, Layer2D, build_chain2d, eval_stride2d, exact_scan2d, patch
from .resample import dirichlet, downsample, neumann, upsample_zoh
from .signal import FragmentedSignal, Kernel, Signal, subsignal
from .windowed import defragment, fragment

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator; identical seeds give identical streams in any language."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Integer in ``[0, n)`` (plain modulo reduction)."""
        return self.next() % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * ((self.next() >> 11) * 2.0**-53)

    def choice(self, seq):
        return seq[self.below(len(seq))]


def same(a: Any, b: Any) -> bool:
    """Structural equality with floats compared bit for bit."""
    if isinstance(a, float) or isinstance(b, float):
        return type(a) is type(b) and struct.pack("<d", a) == struct.pack("<d", b)
    if isinstance(a, (tuple, list)) and isinstance(b, (tuple, list)):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, FragmentedSignal) and isinstance(b, FragmentedSignal):
        return a.shape == b.shape and same(a.entries, b.entries)
    if isinstance(a, Image) and isinstance(b, Image):
        return a.shape == b.shape and same(a.pixels, b.pixels)
    return type(a) is type(b) and a == b


# ---------------------------------------------------------------- random chains

SAMPLE_KINDS = ("int", "float", "symbolic")


def _int_layer(rng: SplitMix64, j: int, c: int, k: int) -> ChainLayer:
    w = [rng.randint(-2, 2) for _ in range(c)]
    b = rng.randint(-3, 3)
    act = rng.choice(("none", "relu", "abs"))

    def f(window, w=w, b=b, act=act):
        s = b
        for wi, x in zip(w, window):
            s += wi * x
        if act == "relu":
            return s if s > 0 else 0
        if act == "abs":
            return -s if s < 0 else s
        return s

    pool = rng.choice(("max", "min", "sum"))
    g = {"max": max, "min": min, "sum": sum}[pool]
    return ChainLayer(Kernel(c, f, f"lin{j}"), Kernel(k, g if k > 1 else (lambda x: x[0]), pool))


def _float_layer(rng: SplitMix64, j: int, c: int, k: int) -> ChainLayer:
    w = [rng.uniform(-1.0, 1.0) for _ in range(c)]
    b = rng.uniform(-0.5, 0.5)
    act = rng.choice(("none", "relu", "tanh"))

    def f(window, w=w, b=b, act=act):
        s = b
        for wi, x in zip(w, window):
            s += wi * x
        if act == "relu":
            return s if s > 0.0 else 0.0
        if act == "tanh":
            return math.tanh(s)
        return s

    pool = rng.choice(("max", "avg", "sum"))

    def g(window, pool=pool):
        if pool == "max":
            return max(window)
        acc = 0.0
        for x in window:
            acc += x
        return acc / len(window) if pool == "avg" else acc

    return ChainLayer(Kernel(c, f, f"lin{j}"), Kernel(k, g, pool))


def _symbolic_layer(rng: SplitMix64, j: int, c: int, k: int) -> ChainLayer:
    f = Kernel(c, lambda w, j=j: f"f{j}(" + ",".join(w) + ")", f"f{j}")
    g = Kernel(k, lambda w, j=j: f"g{j}[" + ",".join(w) + "]", f"g{j}")
    return ChainLayer(f, g)


_LAYER_MAKERS = {"int": _int_layer, "float": _float_layer, "symbolic": _symbolic_layer}
_DUMMIES = {"int": (0, 7777), "float": (0.0, 12345.5), "symbolic": ("z", "Z")}


def random_sample(rng: SplitMix64, kind: str, n: int) -> Any:
    if kind == "int":
        return rng.randint(-9, 9)
    if kind == "float":
        # avoid -0.0: the chain theorems hold regardless, but keep inputs plain
        return rng.uniform(-1.0, 1.0) + 0.0
    return f"x{n}"


@dataclass
class ChainCase:
    trial: int
    kind: str
    c: tuple
    k: tuple
    chain: ProcessingChain
    alt_dummy: Any

    def describe(self) -> str:
        return f"trial={self.trial} samples={self.kind} c={list(self.c)} k={list(self.k)} B={self.chain.B}"


def random_chain_case(rng: SplitMix64, trial: int, max_layers: int = 3, max_c: int = 3, max_k: int = 3) -> ChainCase:
    kind = SAMPLE_KINDS[trial % len(SAMPLE_KINDS)]
    L = rng.randint(1, max_layers)
    c = tuple(rng.randint(1, max_c) for _ in range(L))
    k = tuple(rng.randint(1, max_k) for _ in range(L))
    layers = [_LAYER_MAKERS[kind](rng, j + 1, c[j], k[j]) for j in range(L)]
    z1, z2 = _DUMMIES[kind]
    return ChainCase(trial, kind, c, k, build_chain(layers, z1), z2)


def random_signal(rng: SplitMix64, kind: str, D: int) -> Signal:
    return Signal(random_sample(rng, kind, n) for n in range(1, D + 1))


# ---------------------------------------------------------------- suite bookkeeping


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    checks: int = 0
    failures: int = 0
    first_failure: Optional[str] = None
    _seen: set = field(default_factory=set, repr=False)

    def record(self, ok: bool, trial: int, detail: Callable[[], str]) -> bool:
        self.checks += 1
        if trial not in self._seen:
            self._seen.add(trial)
            self.trials += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = detail()
        return ok


class Suites:
    def __init__(self) -> None:
        self.results: dict = {}
        self.counters: dict = {"mixed-trim": 0, "mixed-stuff": 0, "stuffed-exact": 0}

    def __getitem__(self, name: str) -> SuiteResult:
        if name not in self.results:
            self.results[name] = SuiteResult(name)
        return self.results[name]

    def check(self, name: str, ok: bool, trial: int, detail: Callable[[], str]) -> bool:
        return self[name].record(ok, trial, detail)


# ---------------------------------------------------------------- chain suites


def _shape(x) -> tuple:
    if isinstance(x, FragmentedSignal):
        return x.shape
    return (len(x), 1)


def check_chain_case(case: ChainCase, rng: SplitMix64, suites: Suites, max_d: int) -> None:
    """Run every chain suite for all feasible ``D`` in ``[B, max_d]``."""
    chain = case.chain
    counted, tally = counting_chain(chain)
    alt = chain.with_dummy(case.alt_dummy)
    B, kL, L = chain.B, chain.kL, chain.L
    t = case.trial

    def reset():
        tally.f[:] = [0] * L
        tally.g[:] = [0] * L

    def counts():
        return tuple(tally.f), tuple(tally.g)

    prev_speedups: dict = {}
    for D in range(B, max_d + 1):
        xi = random_signal(rng, case.kind, D)

        def where(extra: str = "", D=D, xi=xi) -> str:
            return f"{case.describe()} D={D} signal={list(xi)!r}{extra}"

        # oracle: patch mode on every subsignal, counted as the stride regime
        reset()
        oracle = [eval_stride(counted, xi[i : i + B])[0] for i in range(D - B + 1)]
        stride_counts = counts()
        suites.check("counts-stride", stride_counts == predicted_counts("stride", chain, D), t, where)

        dense = exact_scan(chain, xi)
        suites.check("exact-scan", same(list(dense), oracle), t, where)
        r = stuffing_amount(chain, D)
        suites.check("stuffing-bound", 0 <= r < kL, t, where)
        if r:
            suites.counters["stuffed-exact"] += 1
            suites.check("zeta-independence", same(exact_scan(alt, xi), dense), t, where)

        dims = chain_dims(chain, D)

        reset()
        stages = list(dilate_stages(counted, xi))
        dil = stages[-1]
        suites.check("counts-dilate", counts() == predicted_counts("dilate", chain, D), t, where)
        suites.check("dilate", same(dil, dense), t, where)
        suites.check("dims-dilate", tuple(len(s) for s in stages) == dims.V, t, where)

        if kL >= 2:
            suites.check("relaxed-scan", same(relaxed_scan(chain, xi), downsample(kL, dense)), t, where)

        if dims.W is not None:
            reset()
            stages = list(relax_stages(counted, xi))
            suites.check("counts-relax", counts() == predicted_counts("relax", chain, D), t, where)
            suites.check("dims-relax", tuple(len(s) for s in stages) == dims.W, t, where)
            suites.check("relax-patches", same(list(stages[-1]), oracle[::kL]), t, where)

        if slide_feasible(chain, D):
            reset()
            stages = list(slide_stages(counted, xi))
            slide_counts = counts()
            suites.check("counts-slide", slide_counts == predicted_counts("slide", chain, D), t, where)
            out = stages[-1]
            suites.check(
                "dims-slide",
                tuple(s.shape for s in stages) == tuple(zip(dims.U_row, dims.U_col)),
                t,
                where,
            )
            suites.check(
                "dims-V-product",
                all(v == a * b for v, a, b in zip(dims.V, dims.U_row, dims.U_col)),
                t,
                where,
            )
            placement = all(
                same(out.at((i - 1) // kL + 1, (i - 1) % kL + 1), oracle[i - 1]) for i in range(1, D - B + 2)
            )
            suites.check("placement-law", placement, t, where)

            reset()
            passes = stitch_passes(counted, xi)
            stitch_counts = counts()
            suites.check("counts-stitch", stitch_counts == predicted_counts("stitch", chain, D), t, where)
            suites.check("stitch-columns", same([list(p) for p in passes], [list(c) for c in out.columns()]), t, where)
            suites.check("stitch-dense", same(shift_and_stitch(chain, xi), dense), t, where)

            ok = True
            for j in range(1, L + 1):
                for which, idx in (("f", 0), ("g", 1)):
                    s = speedup(chain, D, j, which)
                    measured = (stride_counts[idx][j - 1], slide_counts[idx][j - 1])
                    ok &= s * measured[1] == measured[0] and s >= 1
                    sr = speedup_relax(chain, D, j, which, "full")
                    ok &= sr * slide_counts[idx][j - 1] == stitch_counts[idx][j - 1]
                    key = (j, which)
                    if key in prev_speedups and prev_speedups[key][0] == D - kL:
                        ok &= s >= prev_speedups[key][1]
                    prev_speedups[key] = (D, s)
            suites.check("speedup-ratios", ok, t, where)

        for level in range(1, L):
            plan = mixed_plan(chain, level, D)
            got = mixed_scan(chain, level, xi)
            want = downsample(chain.kstar[level], dense)
            suites.counters["mixed-" + plan.mode] += 1
            suites.check(
                "mixed-scan-" + plan.mode, same(got, want), t, lambda level=level: where(f" level={level}")
            )
            if plan.mode == "stuff":
                suites.check("zeta-independence", same(mixed_scan(alt, level, xi), got), t, where)
            entry = dims.mixed[level]
            if not isinstance(entry, str):
                reset()
                stages = list(mixed_stages(counted, level, xi))
                suites.check(
                    "counts-mixed", counts() == predicted_counts("mixed", chain, D, level), t, where
                )
                suites.check(
                    "dims-mixed", tuple(s.shape for s in stages) == tuple(zip(*entry)), t, where
                )


# ---------------------------------------------------------------- other suites


def check_fragmentation(rng: SplitMix64, suites: Suites, trial: int) -> None:
    k = rng.choice((2, 3, 6))
    k2 = rng.choice((1, 2, 3))
    q = k * k2 * rng.randint(1, 2)
    s = rng.randint(1, 6)
    chi = FragmentedSignal(q, s, [rng.randint(0, 2) for _ in range(q * s)])

    def where() -> str:
        return f"trial={trial} k={k} k2={k2} matrix={chi!r}"

    fr = fragment(k, chi)
    suites.check("fragment-inverse", defragment(k, fr) == chi, trial, where)
    law = all(
        fr.at(mu, nu) == chi.at(((mu - 1) * k * s + nu - 1) // s + 1, ((mu - 1) * k * s + nu - 1) % s + 1)
        for mu in range(1, fr.rows + 1)
        for nu in range(1, fr.cols + 1)
    )
    suites.check("fragment-entry-law", law, trial, where)
    simple = all(
        chi.at(mu, nu) == fr.at((mu - 1) // k + 1, ((mu - 1) % k) * s + nu)
        for mu in range(1, q + 1)
        for nu in range(1, s + 1)
    )
    suites.check("defragment-index-law", simple, trial, where)
    suites.check("fragment-composition", fragment(k2, fragment(k, chi)) == fragment(k * k2, chi), trial, where)
    suites.check(
        "fragment-commutativity", fragment(k2, fragment(k, chi)) == fragment(k, fragment(k2, chi)), trial, where
    )


def check_multiscale(rng: SplitMix64, suites: Suites, trial: int) -> None:
    k = rng.choice((2, 3))
    h = rng.randint(k, k + 2)
    B = rng.randint(1, 6)
    D = rng.randint(B, 40)
    weights = [rng.uniform(0.0, 1.0) for _ in range(h)]

    def lowpass(w, weights=weights):
        acc = 0.0
        for a, x in zip(weights, w):
            acc += a * x
        return acc

    theta = dirichlet(0.0) if rng.below(2) == 0 else neumann()
    cfg = MultiScaleConfig(k, Kernel(h, lowpass, "lowpass"), theta, B)
    xi = random_signal(rng, "float", D)

    def where() -> str:
        return f"trial={trial} k={k} h={h} B={B} rule={theta.name} signal={list(xi)!r}"

    R, rt = cfg.R, cfg.R_tilde
    centred = all(
        same(padded_subsignal(xi, B, R, theta, i)[R : R + B], subsignal(xi, B, i)) for i in range(1, D - B + 2)
    )
    suites.check("multiscale-centering", centred, trial, where)
    pi = ms_downscale(cfg, xi)
    suites.check("multiscale-length", len(pi) == -(-(D - B + 1 + rt % 2) // k) + B - 1, trial, where)
    bounds = all(
        (j := ms_index(k, i)) <= i and i - j < k and 1 <= j <= D - B + 1 for i in range(1, D - B + 2)
    )
    suites.check("multiscale-index", bounds, trial, where)
    inside = all(
        same(subsignal(pi, B, (i - 1) // k + 1), ms_subsignal(cfg, xi, ms_index(k, i))) for i in range(1, D - B + 2)
    )
    suites.check("multiscale-subsignal", inside, trial, where)
    g_orig = Kernel(B, lambda w: sum(w), "sum")
    g_down = Kernel(B, lambda w: max(w), "max")
    pair = lambda a, b: (a, b)
    suites.check(
        "multiscale-scan",
        same(ms_scan(cfg, xi, g_orig, g_down, pair), ms_scan_slow(cfg, xi, g_orig, g_down, pair)),
        trial,
        where,
    )


def _random_bank(rng: SplitMix64, c: int, m: int, n: int) -> FilterBank:
    return FilterBank(
        tuple(tuple(tuple(rng.uniform(-1.0, 1.0) + 0.0 for _ in range(n)) for _ in range(m)) for _ in range(c))
    )


def _channel_signal(rng: SplitMix64, D: int, m: int) -> Signal:
    return channel_signal([[rng.uniform(-1.0, 1.0) + 0.0 for _ in range(m)] for _ in range(D)])


def check_transposed(rng: SplitMix64, suites: Suites, trial: int) -> None:
    m, n = rng.randint(1, 3), rng.randint(1, 3)
    c = rng.randint(1, 4)
    w = _random_bank(rng, c, m, n)
    xi = _channel_signal(rng, rng.randint(c, 16), m)

    def where() -> str:
        return f"trial={trial} bank={w.weights!r} signal={list(xi)!r}"

    suites.check("conv-kernel", same(conv(xi, w), Signal(conv_kernel(w)(tuple(xi[i : i + c])) for i in range(len(xi) - c + 1))), trial, where)

    u = rng.choice((2, 4))
    xs = _channel_signal(rng, rng.randint(1, 8), m)
    suites.check(
        "zoh-theorem",
        same(transposed_conv(xs, zoh_filter_bank(u, m), u, u // 2), upsample_zoh(u, xs)),
        trial,
        lambda: f"trial={trial} u={u} signal={list(xs)!r}",
    )

    u = rng.randint(1, 4)
    wu = _random_bank(rng, u, m, n)
    suites.check(
        "duc-theorem",
        same(duc(xs, duc_reorder(wu), u), transposed_conv(xs, wu, u, 0)),
        trial,
        lambda: f"trial={trial} u={u} bank={wu.weights!r} signal={list(xs)!r}",
    )


def check_transposed_lengths(suites: Suites) -> None:
    """Exhaustive output-length check for D <= 8, k <= 3, c <= 5, P <= 2."""
    for c in range(1, 6):
        w = FilterBank(tuple(((1.0,),) for _ in range(c)))
        for k in range(1, 4):
            for P in range(0, 3):
                for D in range(transposed_min_length(c, k, P), 9):
                    out = transposed_conv([(1.0,)] * D, w, k, P)
                    suites.check(
                        "trconv-length",
                        len(out) == k * (D - 1) + c - 2 * P,
                        0,
                        lambda: f"c={c} k={k} P={P} D={D} got {len(out)}",
                    )


def check_planar(rng: SplitMix64, suites: Suites, trial: int) -> None:
    L = rng.randint(1, 2)
    layers = []
    desc = []
    for j in range(L):
        fr, fc, kr, kc = (rng.randint(1, 2) for _ in range(4))
        w = [rng.randint(-2, 2) for _ in range(fr * fc)]
        b = rng.randint(-3, 3)

        def f(block, w=w, b=b):
            s = b
            for wi, x in zip(w, (x for row in block for x in row)):
                s += wi * x
            return s

        pool = max if rng.below(2) == 0 else min
        layers.append(Layer2D(Kernel2D(fr, fc, f), Kernel2D(kr, kc, lambda blk, p=pool: p(x for row in blk for x in row))))
        desc.append((fr, fc, kr, kc))
    chain = build_chain2d(layers, 0)
    rows = rng.randint(chain.B_r, max(chain.B_r, 12))
    cols = rng.randint(chain.B_c, max(chain.B_c, 12))
    img = Image(rows, cols, [rng.randint(-9, 9) for _ in range(rows * cols)])
    out = exact_scan2d(chain, img)
    ok = out.shape == (rows - chain.B_r + 1, cols - chain.B_c + 1) and all(
        out.at(i, j) == eval_stride2d(chain, patch(img, chain.B_r, chain.B_c, i, j)).pixels[0]
        for i in range(1, out.rows + 1)
        for j in range(1, out.cols + 1)
    )
    suites.check("exact-scan-2d", ok, trial, lambda: f"trial={trial} layers={desc} image={img!r}")


# ---------------------------------------------------------------- manifest and report


@dataclass(frozen=True)
class Manifest:
    seed: int = 1
    trials: int = 200
    max_layers: int = 3
    max_c: int = 3
    max_k: int = 3
    max_d: int = 64


@dataclass
class VerifyReport:
    manifest: Manifest
    suites: Suites

    @property
    def passed(self) -> bool:
        return all(r.failures == 0 for r in self.suites.results.values())

    @property
    def vacuous(self) -> list:
        return [r.name for r in self.suites.results.values() if r.trials == 0]

    def text(self) -> str:
        m = self.manifest
        lines = [
            f"densescan verify: seed={m.seed} trials={m.trials} "
            f"max_layers={m.max_layers} max_c={m.max_c} max_k={m.max_k} max_d={m.max_d}"
        ]
        width = max(len(n) for n in self.suites.results) if self.suites.results else 10
        for name in sorted(self.suites.results):
            r = self.suites.results[name]
            status = "PASS" if r.failures == 0 else "FAIL"
            lines.append(f"  {name:<{width}}  {status}  {r.trials} trials, {r.checks} checks, {r.failures} failures")
        for key in sorted(self.suites.counters):
            lines.append(f"  counter {key} = {self.suites.counters[key]}")
        for name in self.vacuous:
            lines.append(f"warning: suite {name} ran 0 trials (vacuous pass)")
        for name in sorted(self.suites.results):
            r = self.suites.results[name]
            if r.first_failure:
                lines.append(f"first failure in {name}: {r.first_failure}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


CHAIN_SUITES = (
    "exact-scan",
    "dilate",
    "relaxed-scan",
    "stitch-columns",
    "mixed-scan-trim",
    "mixed-scan-stuff",
    "zeta-independence",
    "placement-law",
    "dims-slide",
    "dims-dilate",
    "counts-stride",
    "counts-slide",
)


def iter_chain_cases(manifest: Manifest) -> Iterator[tuple]:
    """Yield ``(case, rng)`` pairs; each case has its own generator stream."""
    for t in range(manifest.trials):
        rng = SplitMix64(manifest.seed ^ (t * 0x9E3779B97F4A7C15 & MASK64))
        case = random_chain_case(rng, t, manifest.max_layers, manifest.max_c, manifest.max_k)
        yield case, rng


def run_verification(manifest: Manifest = Manifest()) -> VerifyReport:
    suites = Suites()
    for name in CHAIN_SUITES:
        suites[name]
    for case, rng in iter_chain_cases(manifest):
        check_chain_case(case, rng, suites, manifest.max_d)
    rng = SplitMix64(manifest.seed)
    for t in range(manifest.trials):
        check_fragmentation(rng, suites, t)
        check_multiscale(rng, suites, t)
        check_transposed(rng, suites, t)
        check_planar(rng, suites, t)
    check_transposed_lengths(suites)
    return VerifyReport(manifest, suites)
