import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densescan import (
    FragmentedSignal,
    IndexOutOfRange,
    LengthError,
    ShapeError,
    Signal,
    euclid_divmod,
    subsignal,
    unvectorize,
    vectorize,
)


class TestEuclidDivmod:
    def test_examples(self):
        assert euclid_divmod(7, 3) == (2, 1)
        assert euclid_divmod(5, 1) == (5, 0)
        assert euclid_divmod(0, 4) == (0, 0)

    def test_rejects_zero_divisor(self):
        with pytest.raises(ValueError):
            euclid_divmod(3, 0)

    @given(st.integers(0, 10**6), st.integers(1, 10**6), st.integers(0, 10**6))
    def test_shift_identities(self, a, c, b):
        q, r = euclid_divmod(a, c)
        assert a == q * c + r and 0 <= r <= c - 1
        assert euclid_divmod(a + b * c, c) == (q + b, r)


class TestSignal:
    def test_empty_rejected(self):
        with pytest.raises(LengthError):
            Signal([])

    def test_one_based_access(self):
        xi = Signal([10, 20, 30])
        assert xi.at(1) == 10 and xi.at(3) == 30
        with pytest.raises(IndexOutOfRange):
            xi.at(0)


class TestSubsignal:
    def test_examples(self):
        assert subsignal([10, 20, 30, 40, 50], 3, 2) == (20, 30, 40)
        xi = Signal(range(1, 9))
        assert subsignal(xi, 4, 5) == (5, 6, 7, 8)
        with pytest.raises(IndexOutOfRange):
            subsignal(xi, 4, 6)
        assert subsignal(xi, 8, 1) == xi

    def test_too_short(self):
        with pytest.raises(LengthError):
            subsignal([1, 2], 3, 1)

    def test_composition_exhaustive_small(self):
        for D in range(1, 9):
            xi = Signal(range(100, 100 + D))
            for d in range(1, D + 1):
                for c in range(1, d + 1):
                    for i in range(1, D - d + 2):
                        for j in range(1, d - c + 2):
                            assert subsignal(subsignal(xi, d, i), c, j) == subsignal(xi, c, i + j - 1)

    @settings(max_examples=200)
    @given(st.data())
    def test_composition_random(self, data):
        xi = data.draw(st.lists(st.integers(), min_size=1, max_size=64))
        D = len(xi)
        d = data.draw(st.integers(1, D))
        c = data.draw(st.integers(1, d))
        i = data.draw(st.integers(1, D - d + 1))
        j = data.draw(st.integers(1, d - c + 1))
        assert subsignal(subsignal(xi, d, i), c, j) == subsignal(xi, c, i + j - 1)


class TestVectorize:
    def test_examples(self):
        chi = FragmentedSignal.from_rows([[1, 3], [2, 4]])
        assert vectorize(chi) == (1, 2, 3, 4)
        assert unvectorize([1, 2, 3, 4], 2, 2) == chi
        xi = [5, 6, 7, 8, 9, 10]
        assert vectorize(unvectorize(xi, 3, 2)) == tuple(xi)

    def test_entry_laws(self):
        xi = list(range(12))
        chi = unvectorize(xi, 4, 3)
        for j in range(1, 13):
            a = 4
            assert vectorize(chi).at(j) == chi.at((j - 1) % a + 1, (j - 1) // a + 1)
        for i in range(1, 5):
            for j in range(1, 4):
                assert chi.at(i, j) == xi[(j - 1) * 4 + i - 1]

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            unvectorize([1, 2, 3], 2, 2)

    def test_round_trip_exhaustive_2x2(self):
        for values in itertools.product(range(3), repeat=4):
            chi = FragmentedSignal(2, 2, values)
            assert unvectorize(vectorize(chi), 2, 2) == chi

    @given(st.integers(1, 8), st.integers(1, 8), st.data())
    def test_round_trip_random(self, a, b, data):
        values = data.draw(st.lists(st.integers(0, 2), min_size=a * b, max_size=a * b))
        chi = FragmentedSignal(a, b, values)
        assert unvectorize(vectorize(chi), a, b) == chi
        assert vectorize(unvectorize(values, a, b)) == tuple(values)
