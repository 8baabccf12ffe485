"""NSF: a plain-text tensor format for signals, images and filter banks.

Line 1 is ``nsf <rank> <dim1> ... <dimR> <channels>``. Each following
non-comment line holds one sample (its channels separated by spaces), in
row-major order over the dims. Comment lines start with ``#``; a fragmented
signal carries ``# fragments=<s>``. Floats are written with ``repr``, the
shortest decimal string that round-trips.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .cnn import FilterBank
from .errors import ParseError
from .planar2d import Image
from .signal import FragmentedSignal, Signal

_INT = re.compile(r"[+-]?\d+\Z")


@dataclass(frozen=True)
class Tensor:
    dims: tuple
    channels: int
    samples: tuple  # row-major tuple of channel tuples
    fragments: Optional[int] = None

    @property
    def rank(self) -> int:
        return len(self.dims)


def format_number(x: float) -> str:
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def parse_number(token: str) -> float:
    if _INT.match(token):
        return float(int(token))
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}") from None
    if math.isnan(value):
        raise ParseError("NaN is not allowed in numeric files")
    return value


def dumps(t: Tensor) -> str:
    head = " ".join(["nsf", str(t.rank), *map(str, t.dims), str(t.channels)])
    lines = [head]
    if t.fragments is not None:
        lines.append(f"# fragments={t.fragments}")
    for s in t.samples:
        lines.append(" ".join(format_number(v) for v in s))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Tensor:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file")
    head = lines[0].split()
    if len(head) < 3 or head[0] != "nsf":
        raise ParseError("first line must read 'nsf <rank> <dims...> <channels>'")
    try:
        rank = int(head[1])
        nums = [int(v) for v in head[2:]]
    except ValueError:
        raise ParseError("header fields must be integers") from None
    if rank < 1 or len(nums) != rank + 1 or any(v < 1 for v in nums):
        raise ParseError(f"header declares rank {rank} but lists {len(nums)} sizes")
    dims, channels = tuple(nums[:-1]), nums[-1]
    fragments = None
    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if stripped.startswith("#"):
            m = re.fullmatch(r"#\s*fragments=(\d+)", stripped)
            if m:
                fragments = int(m.group(1))
            continue
        tokens = stripped.split()
        if len(tokens) != channels:
            raise ParseError(f"line {lineno}: expected {channels} channels, found {len(tokens)}")
        samples.append(tuple(parse_number(tok) for tok in tokens))
    expected = math.prod(dims)
    if len(samples) != expected:
        raise ParseError(f"expected {expected} samples, found {len(samples)}")
    if fragments is not None and (rank != 2 or fragments != dims[1]):
        raise ParseError("a fragments comment needs rank 2 with the fragment count as second dim")
    return Tensor(dims, channels, tuple(samples), fragments)


def read(path: str | Path) -> Tensor:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc})") from None
    return loads(text)


def write(path: str | Path, t: Tensor) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(t))


# conversions between tensors and library types


def from_signal(xi: Sequence) -> Tensor:
    samples = tuple(s if isinstance(s, tuple) else (s,) for s in xi)
    return Tensor((len(samples),), len(samples[0]), samples)


def from_fragmented(chi: FragmentedSignal) -> Tensor:
    samples = tuple(s if isinstance(s, tuple) else (s,) for s in chi.entries)
    return Tensor((chi.rows, chi.cols), len(samples[0]), samples, fragments=chi.cols)


def from_image(xi: Image) -> Tensor:
    samples = tuple(s if isinstance(s, tuple) else (s,) for s in xi.pixels)
    return Tensor((xi.rows, xi.cols), len(samples[0]), samples)


def from_filter_bank(w: FilterBank) -> Tensor:
    samples = tuple((v,) for tap in w.weights for row in tap for v in row)
    return Tensor((w.c, w.m, w.n), 1, samples)


def to_signal(t: Tensor) -> Signal:
    if t.rank != 1:
        raise ParseError(f"expected a rank-1 signal, got rank {t.rank}")
    return Signal(t.samples)


def to_fragmented(t: Tensor) -> FragmentedSignal:
    if t.rank != 2:
        raise ParseError(f"expected a rank-2 tensor, got rank {t.rank}")
    return FragmentedSignal(t.dims[0], t.dims[1], t.samples)


def to_image(t: Tensor) -> Image:
    if t.rank != 2:
        raise ParseError(f"expected a rank-2 image, got rank {t.rank}")
    return Image(t.dims[0], t.dims[1], t.samples)


def to_filter_bank(t: Tensor) -> FilterBank:
    if t.rank != 3 or t.channels != 1:
        raise ParseError("a filter bank is a rank-3 tensor (c, m, n) with one channel")
    c, m, n = t.dims
    v = [s[0] for s in t.samples]
    try:
        return FilterBank(
            tuple(
                tuple(tuple(v[(mu * m + lam) * n + kappa] for kappa in range(n)) for lam in range(m))
                for mu in range(c)
            )
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None
