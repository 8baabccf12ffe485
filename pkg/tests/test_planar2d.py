import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densescan import (
    DivisibilityError,
    FragmentedImage,
    Image,
    Kernel2D,
    Layer2D,
    LengthError,
    build_chain2d,
    defragment2d,
    eval_slide2d,
    eval_stride2d,
    exact_scan2d,
    fragment2d,
    patch,
    slide2d,
    stride2d,
)


def block_sum(r, c):
    return Kernel2D(r, c, lambda b: sum(sum(row) for row in b))


def block_max(r, c):
    return Kernel2D(r, c, lambda b: max(max(row) for row in b))


def grid(rows, cols):
    return Image.from_rows([[10 * i + j for j in range(cols)] for i in range(rows)])


def test_patch_and_windows():
    xi = grid(3, 4)
    assert patch(xi, 2, 2, 2, 3).to_rows() == [(12, 13), (22, 23)]
    assert slide2d(block_sum(2, 2), xi).shape == (2, 3)
    assert stride2d(block_max(1, 2), xi).to_rows() == [(1, 3), (11, 13), (21, 23)]
    with pytest.raises(DivisibilityError):
        stride2d(block_max(2, 2), xi)
    with pytest.raises(LengthError):
        slide2d(block_sum(4, 1), xi)


def test_fragmentation_round_trip():
    xi = grid(4, 6)
    chi = fragment2d(2, 3, xi)
    assert (chi.frag_rows, chi.frag_cols, chi.fragment_shape) == (2, 3, (2, 2))
    assert chi.fragment_at(2, 3).to_rows() == [(12, 15), (32, 35)]
    assert defragment2d(2, 3, chi) == FragmentedImage.single(xi)
    twice = fragment2d(2, 1, fragment2d(1, 3, xi))
    assert defragment2d(2, 3, twice) == FragmentedImage.single(xi)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 2), st.integers(1, 2), st.integers(1, 2), st.integers(1, 2)), min_size=1, max_size=2),
    st.integers(0, 5),
    st.integers(0, 5),
)
def test_exact_scan_matches_patches(layers, er, ec):
    chain = build_chain2d([Layer2D(block_sum(a, b), block_max(c, d)) for a, b, c, d in layers], 0)
    xi = Image.from_rows([[(7 * i + 3 * j) % 11 for j in range(chain.B_c + ec)] for i in range(chain.B_r + er)])
    dense = exact_scan2d(chain, xi)
    assert dense.shape == (er + 1, ec + 1)
    for i in range(1, er + 2):
        for j in range(1, ec + 2):
            assert dense.at(i, j) == eval_stride2d(chain, patch(xi, chain.B_r, chain.B_c, i, j)).at(1, 1)


def test_slide_requires_divisibility():
    chain = build_chain2d([Layer2D(block_sum(2, 2), block_max(2, 2))], 0)
    assert (chain.B_r, chain.B_c) == (3, 3)
    assert eval_slide2d(chain, grid(4, 4)).frag_rows == 2
    with pytest.raises(DivisibilityError):
        eval_slide2d(chain, grid(5, 4))
