"""Signals, fragmented signals, kernels and the index arithmetic behind them.

Public indices are 1-based throughout. Python sequences are used for
storage, so ``Signal`` also supports ordinary 0-based ``[]`` access; the
1-based accessors are :meth:`Signal.at` and :meth:`FragmentedSignal.at`.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

from .errors import IndexOutOfRange, LengthError, ShapeError

Sample = Any


def euclid_divmod(a: int, b: int) -> tuple[int, int]:
    """Return ``(div(a, b), rem(a, b))`` with ``0 <= rem <= b - 1``."""
    if b < 1:
        raise ValueError(f"divisor must be positive, got {b}")
    return divmod(a, b)


class Signal(tuple):
    """Immutable non-empty sequence of samples."""

    __slots__ = ()

    def __new__(cls, samples: Iterable[Sample] = ()) -> "Signal":
        self = super().__new__(cls, samples)
        if not self:
            raise LengthError("signals must contain at least one sample")
        return self

    def __repr__(self) -> str:
        return f"Signal({list(self)!r})"

    @property
    def length(self) -> int:
        return len(self)

    def at(self, nu: int) -> Sample:
        """Sample ``nu`` (1-based)."""
        if not 1 <= nu <= len(self):
            raise IndexOutOfRange(f"sample index {nu} outside [1, {len(self)}]")
        return tuple.__getitem__(self, nu - 1)


class FragmentedSignal:
    """Rectangular matrix of samples; columns are fragments.

    Entries are kept as one row-major tuple.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Sample]) -> None:
        entries = tuple(entries)
        if rows < 1 or cols < 1:
            raise ShapeError(f"matrix must be non-empty, got {rows}x{cols}")
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries cannot fill a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("FragmentedSignal is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Sample]]) -> "FragmentedSignal":
        if not rows:
            raise ShapeError("matrix must be non-empty")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("rows have different lengths")
        return cls(len(rows), width, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Sample]]) -> "FragmentedSignal":
        if not columns:
            raise ShapeError("matrix must have at least one fragment")
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise ShapeError("fragments have different lengths")
        return cls(height, len(columns), (x for row in zip(*columns) for x in row))

    @classmethod
    def from_signal(cls, xi: Sequence[Sample]) -> "FragmentedSignal":
        """Single-fragment matrix holding ``xi`` as its only column."""
        return cls(len(xi), 1, xi)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def at(self, mu: int, nu: int) -> Sample:
        """Entry in row ``mu`` and column ``nu`` (both 1-based)."""
        if not (1 <= mu <= self.rows and 1 <= nu <= self.cols):
            raise IndexOutOfRange(f"entry ({mu}, {nu}) outside {self.rows}x{self.cols}")
        return self.entries[(mu - 1) * self.cols + nu - 1]

    def column(self, nu: int) -> Signal:
        """Fragment ``nu`` (1-based) as a signal."""
        if not 1 <= nu <= self.cols:
            raise IndexOutOfRange(f"fragment {nu} outside [1, {self.cols}]")
        return Signal(self.entries[nu - 1 :: self.cols])

    def columns(self) -> list[Signal]:
        return [Signal(self.entries[g :: self.cols]) for g in range(self.cols)]

    def to_rows(self) -> list[tuple]:
        c = self.cols
        return [self.entries[r * c : (r + 1) * c] for r in range(self.rows)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FragmentedSignal):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"FragmentedSignal({self.rows}x{self.cols}, rows={self.to_rows()!r})"


class Kernel:
    """A pure function of ``arity`` consecutive samples.

    The window is passed as a tuple. Kernels must be deterministic; every
    equivalence in this library relies on that.
    """

    __slots__ = ("arity", "fn", "name")

    def __init__(self, arity: int, fn: Callable[[tuple], Sample], name: str | None = None) -> None:
        if arity < 1:
            raise ValueError(f"kernel arity must be positive, got {arity}")
        self.arity = arity
        self.fn = fn
        self.name = name or getattr(fn, "__name__", "kernel")

    def __call__(self, window: tuple) -> Sample:
        return self.fn(window)

    def __repr__(self) -> str:
        return f"Kernel({self.name}, arity={self.arity})"


def identity_kernel() -> Kernel:
    return Kernel(1, lambda w: w[0], "identity")


def subsignal(xi: Sequence[Sample], d: int, i: int) -> Signal:
    """Samples ``xi[i .. i+d-1]`` (1-based)."""
    D = len(xi)
    if d < 1 or D < d:
        raise LengthError(f"signal of length {D} has no subsignals of length {d}")
    if not 1 <= i <= D - d + 1:
        raise IndexOutOfRange(f"subsignal index {i} outside [1, {D - d + 1}]")
    return Signal(xi[i - 1 : i - 1 + d])


def vectorize(chi: FragmentedSignal) -> Signal:
    """Stack the columns of ``chi`` on top of each other."""
    return Signal(x for col in chi.columns() for x in col)


def unvectorize(xi: Sequence[Sample], a: int, b: int) -> FragmentedSignal:
    """Inverse of :func:`vectorize`: an ``a`` x ``b`` matrix filled column by column."""
    if a < 1 or b < 1 or len(xi) != a * b:
        raise ShapeError(f"cannot reshape {len(xi)} samples into {a}x{b}")
    return FragmentedSignal.from_columns([xi[j * a : (j + 1) * a] for j in range(b)])
