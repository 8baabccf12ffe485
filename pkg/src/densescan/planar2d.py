"""Two-dimensional patches, fragmentation and exact image scanning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .chain import receptive_field, stride_products
from .errors import DivisibilityError, IllFormedChain, IndexOutOfRange, LengthError, ShapeError
from .signal import Sample


class Image:
    """Immutable rectangular matrix of samples, stored row-major."""

    __slots__ = ("rows", "cols", "pixels")

    def __init__(self, rows: int, cols: int, pixels: Sequence[Sample]) -> None:
        pixels = tuple(pixels)
        if rows < 1 or cols < 1 or len(pixels) != rows * cols:
            raise ShapeError(f"{len(pixels)} pixels cannot fill a {rows}x{cols} image")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "pixels", pixels)

    def __setattr__(self, name, value) -> None:
        raise AttributeError("Image is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Sample]]) -> "Image":
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("image rows must be non-empty and of equal length")
        return cls(len(rows), len(rows[0]), (x for r in rows for x in r))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def at(self, i: int, j: int) -> Sample:
        """Pixel in row ``i``, column ``j`` (1-based)."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexOutOfRange(f"pixel ({i}, {j}) outside {self.rows}x{self.cols}")
        return self.pixels[(i - 1) * self.cols + j - 1]

    def to_rows(self) -> list[tuple]:
        c = self.cols
        return [self.pixels[r * c : (r + 1) * c] for r in range(self.rows)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and self.pixels == other.pixels

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.pixels))

    def __repr__(self) -> str:
        return f"Image({self.rows}x{self.cols}, {self.to_rows()!r})"


class Kernel2D:
    """Pure function of a ``rows x cols`` block, passed as a tuple of row tuples."""

    __slots__ = ("rows", "cols", "fn", "name")

    def __init__(self, rows: int, cols: int, fn: Callable[[tuple], Sample], name: str | None = None) -> None:
        if rows < 1 or cols < 1:
            raise ValueError(f"kernel extent must be positive, got {rows}x{cols}")
        self.rows, self.cols, self.fn = rows, cols, fn
        self.name = name or getattr(fn, "__name__", "kernel2d")

    def __repr__(self) -> str:
        return f"Kernel2D({self.name}, {self.rows}x{self.cols})"


def patch(xi: Image, d_r: int, d_c: int, i: int, j: int) -> Image:
    """The ``d_r x d_c`` submatrix whose top-left pixel is ``(i, j)``."""
    if d_r > xi.rows or d_c > xi.cols:
        raise LengthError(f"{xi.rows}x{xi.cols} image has no {d_r}x{d_c} patches")
    if not (1 <= i <= xi.rows - d_r + 1 and 1 <= j <= xi.cols - d_c + 1):
        raise IndexOutOfRange(f"patch index ({i}, {j}) outside [1, {xi.rows - d_r + 1}]x[1, {xi.cols - d_c + 1}]")
    rows = xi.to_rows()
    return Image.from_rows([r[j - 1 : j - 1 + d_c] for r in rows[i - 1 : i - 1 + d_r]])


def _apply(f: Kernel2D, xi: Image, step_r: int, step_c: int) -> Image:
    rows = xi.to_rows()
    fr, fc, fn = f.rows, f.cols, f.fn
    out = []
    for i in range(0, xi.rows - fr + 1, step_r):
        block_rows = rows[i : i + fr]
        out.append([fn(tuple(r[j : j + fc] for r in block_rows)) for j in range(0, xi.cols - fc + 1, step_c)])
    return Image.from_rows(out)


def slide2d(f: Kernel2D, xi: Image) -> Image:
    """Apply ``f`` at every patch position."""
    if xi.rows < f.rows or xi.cols < f.cols:
        raise LengthError(f"{xi.rows}x{xi.cols} image is smaller than the {f.rows}x{f.cols} kernel")
    return _apply(f, xi, 1, 1)


def stride2d(g: Kernel2D, xi: Image) -> Image:
    """Apply ``g`` to non-overlapping blocks."""
    if xi.rows % g.rows or xi.cols % g.cols:
        raise DivisibilityError(f"{g.rows}x{g.cols} blocks do not tile a {xi.rows}x{xi.cols} image")
    return _apply(g, xi, g.rows, g.cols)


class FragmentedImage:
    """``frag_rows x frag_cols`` grid of equally sized fragments.

    ``fragments`` lists them in row-major order: fragment ``(a, b)``
    (1-based) has linear index ``(a - 1) * frag_cols + b``.
    """

    __slots__ = ("frag_rows", "frag_cols", "fragments")

    def __init__(self, frag_rows: int, frag_cols: int, fragments: Sequence[Image]) -> None:
        fragments = tuple(fragments)
        if len(fragments) != frag_rows * frag_cols or not fragments:
            raise ShapeError(f"{len(fragments)} fragments cannot fill a {frag_rows}x{frag_cols} grid")
        if any(f.shape != fragments[0].shape for f in fragments):
            raise ShapeError("fragments must share one shape")
        object.__setattr__(self, "frag_rows", frag_rows)
        object.__setattr__(self, "frag_cols", frag_cols)
        object.__setattr__(self, "fragments", fragments)

    def __setattr__(self, name, value) -> None:
        raise AttributeError("FragmentedImage is immutable")

    @classmethod
    def single(cls, xi: Image) -> "FragmentedImage":
        return cls(1, 1, (xi,))

    @property
    def fragment_shape(self) -> tuple[int, int]:
        return self.fragments[0].shape

    def fragment_at(self, a: int, b: int) -> Image:
        """Fragment in grid row ``a`` and grid column ``b`` (1-based)."""
        return self.fragments[(a - 1) * self.frag_cols + b - 1]

    def map(self, op: Callable[[Image], Image]) -> "FragmentedImage":
        return FragmentedImage(self.frag_rows, self.frag_cols, [op(f) for f in self.fragments])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FragmentedImage):
            return NotImplemented
        return (self.frag_rows, self.frag_cols, self.fragments) == (other.frag_rows, other.frag_cols, other.fragments)

    def __repr__(self) -> str:
        return f"FragmentedImage({self.frag_rows}x{self.frag_cols} of {self.fragment_shape})"


def fragment2d(k_r: int, k_c: int, chi: FragmentedImage | Image) -> FragmentedImage:
    """Polyphase split by ``k_r`` along rows and ``k_c`` along columns.

    Along each axis this is the 1D law: phase ``p`` of old fragment ``a``
    becomes fragment ``p * s + a`` where ``s`` is the old fragment count.
    """
    if isinstance(chi, Image):
        chi = FragmentedImage.single(chi)
    R, C = chi.fragment_shape
    if k_r < 1 or k_c < 1 or R % k_r or C % k_c:
        raise DivisibilityError(f"({k_r}, {k_c}) does not divide the fragment shape {R}x{C}")
    s_r, s_c = chi.frag_rows, chi.frag_cols
    nr, nc = R // k_r, C // k_c
    grid = {}
    for a in range(s_r):
        for b in range(s_c):
            src = chi.fragments[a * s_c + b].to_rows()
            for pr in range(k_r):
                for pc in range(k_c):
                    grid[(pr * s_r + a, pc * s_c + b)] = Image(
                        nr, nc, (src[m * k_r + pr][n * k_c + pc] for m in range(nr) for n in range(nc))
                    )
    FR, FC = k_r * s_r, k_c * s_c
    return FragmentedImage(FR, FC, [grid[(a, b)] for a in range(FR) for b in range(FC)])


def defragment2d(k_r: int, k_c: int, chi: FragmentedImage) -> FragmentedImage:
    """Inverse of :func:`fragment2d`."""
    FR, FC = chi.frag_rows, chi.frag_cols
    if k_r < 1 or k_c < 1 or FR % k_r or FC % k_c:
        raise DivisibilityError(f"({k_r}, {k_c}) does not divide the fragment grid {FR}x{FC}")
    s_r, s_c = FR // k_r, FC // k_c
    nr, nc = chi.fragment_shape
    out = []
    for a in range(s_r):
        for b in range(s_c):
            parts = {
                (pr, pc): chi.fragments[(pr * s_r + a) * FC + pc * s_c + b].to_rows()
                for pr in range(k_r)
                for pc in range(k_c)
            }
            out.append(
                Image(
                    nr * k_r,
                    nc * k_c,
                    (
                        parts[(y % k_r, x % k_c)][y // k_r][x // k_c]
                        for y in range(nr * k_r)
                        for x in range(nc * k_c)
                    ),
                )
            )
    return FragmentedImage(s_r, s_c, out)


@dataclass(frozen=True)
class Layer2D:
    f: Kernel2D
    g: Kernel2D


@dataclass(frozen=True)
class Chain2D:
    layers: tuple
    dummy: Sample
    B_r: int
    B_c: int
    kstar_r: tuple
    kstar_c: tuple

    @property
    def kL_r(self) -> int:
        return self.kstar_r[-1]

    @property
    def kL_c(self) -> int:
        return self.kstar_c[-1]


def _axis_profile(c: list, k: list, axis: str) -> tuple[int, tuple]:
    ks = stride_products(k)
    B = receptive_field(c, k)
    consumed = 0
    for j in range(1, len(c) + 1):
        consumed += ks[j - 1] * (c[j - 1] - 1)
        if (B - consumed) % ks[j] or (B - consumed) // ks[j] < 1:
            raise IllFormedChain(j, f"{axis} axis u-profile is not positive integral")
    return B, ks


def build_chain2d(layers: Sequence[Layer2D], dummy: Sample) -> Chain2D:
    """Chain of 2D layers; the receptive field is derived per axis."""
    layers = tuple(layers)
    if not layers:
        raise IllFormedChain(0, "a chain needs at least one layer")
    B_r, ks_r = _axis_profile([l.f.rows for l in layers], [l.g.rows for l in layers], "row")
    B_c, ks_c = _axis_profile([l.f.cols for l in layers], [l.g.cols for l in layers], "column")
    return Chain2D(layers, dummy, B_r, B_c, ks_r, ks_c)


def eval_stride2d(chain: Chain2D, rho: Image) -> Image:
    """Patch-mode evaluation on exactly ``B_r x B_c`` pixels; returns a 1x1 image."""
    if rho.shape != (chain.B_r, chain.B_c):
        raise LengthError(f"patch mode needs a {chain.B_r}x{chain.B_c} patch, got {rho.rows}x{rho.cols}")
    x = rho
    for layer in chain.layers:
        x = stride2d(layer.g, slide2d(layer.f, x))
    return x


def stuffing_amounts2d(chain: Chain2D, rows: int, cols: int) -> tuple[int, int]:
    rr = (rows - chain.B_r + 1) % chain.kL_r
    rc = (cols - chain.B_c + 1) % chain.kL_c
    return (0 if rr == 0 else chain.kL_r - rr, 0 if rc == 0 else chain.kL_c - rc)


def eval_slide2d(chain: Chain2D, xi: Image) -> FragmentedImage:
    """Whole-image evaluation; needs per-axis divisibility of ``D - B + 1`` by ``k_L*``."""
    if (xi.rows - chain.B_r + 1) % chain.kL_r or (xi.cols - chain.B_c + 1) % chain.kL_c:
        raise DivisibilityError(
            f"stride products ({chain.kL_r}, {chain.kL_c}) must divide "
            f"({xi.rows - chain.B_r + 1}, {xi.cols - chain.B_c + 1})"
        )
    chi = FragmentedImage.single(xi)
    for layer in chain.layers:
        chi = chi.map(lambda im, l=layer: slide2d(l.g, slide2d(l.f, im)))
        chi = fragment2d(layer.g.rows, layer.g.cols, chi)
    return chi


def exact_scan2d(chain: Chain2D, xi: Image) -> Image:
    """Patch-mode result at every patch position, via whole-image evaluation."""
    if xi.rows < chain.B_r or xi.cols < chain.B_c:
        raise LengthError(f"{xi.rows}x{xi.cols} image is smaller than the {chain.B_r}x{chain.B_c} receptive field")
    r_r, r_c = stuffing_amounts2d(chain, xi.rows, xi.cols)
    z = chain.dummy
    rows = [list(r) + [z] * r_c for r in xi.to_rows()]
    rows += [[z] * (xi.cols + r_c) for _ in range(r_r)]
    out = defragment2d(chain.kL_r, chain.kL_c, eval_slide2d(chain, Image.from_rows(rows))).fragments[0]
    n_r, n_c = xi.rows - chain.B_r + 1, xi.cols - chain.B_c + 1
    return Image.from_rows([r[:n_c] for r in out.to_rows()[:n_r]])
