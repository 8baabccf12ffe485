from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densescan import (
    ChainLayer,
    Kernel,
    build_chain,
    bypass_layer,
    chain_dims,
    count_eval,
    emit_report,
    measured_ratio,
    predicted_counts,
    speedup,
    speedup_limit,
    speedup_relax,
    speedup_relax_limit,
)
from densescan.chain import slide_feasible



def numeric_chain(c, k):
    layers = [ChainLayer(Kernel(cj, sum), Kernel(kj, max)) for cj, kj in zip(c, k)]
    return build_chain(layers, 0)


class TestCounts:
    def test_running_example(self, sum_max_chain):
        stride = count_eval("stride", sum_max_chain, 6)
        slide = count_eval("slide", sum_max_chain, 6)
        assert (stride.f_measured, stride.g_measured) == ((8,), (4,))
        assert (slide.f_measured, slide.g_measured) == ((5,), (4,))
        assert stride.agrees and slide.agrees
        assert count_eval("dilate", sum_max_chain, 6).f_measured == (5,)

    def test_ratios(self, sum_max_chain):
        assert speedup(sum_max_chain, 6, 1, "f") == Fraction(8, 5)
        assert speedup(sum_max_chain, 6, 1, "g") == 1
        assert speedup_limit(sum_max_chain, 1, "f") == 2
        assert speedup_limit(sum_max_chain, 1, "g") == 1
        assert speedup_relax(sum_max_chain, 6, 1, "f") == Fraction(8, 5)
        assert speedup_relax(sum_max_chain, 6, 1, "f", passes="one") == Fraction(4, 5)
        assert speedup_relax_limit(sum_max_chain, 1, "f") == 2
        with pytest.raises(ValueError):
            speedup(sum_max_chain, 6, 1, "h")

    def test_pointwise_chain_has_unit_ratios(self):
        point = Kernel(1, lambda w: 2 * w[0])
        ch = build_chain([bypass_layer(point), bypass_layer(point)], 0)
        for D in (1, 5, 9):
            s, t = count_eval("stride", ch, D), count_eval("slide", ch, D)
            for j in (1, 2):
                assert speedup(ch, D, j, "f") == 1 == measured_ratio(s, t, j, "f")
                assert speedup(ch, D, j, "g") == 1 == measured_ratio(s, t, j, "g")

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=3), st.integers(0, 24))
    def test_measured_matches_predicted(self, layers, extra):
        c, k = zip(*layers)
        ch = numeric_chain(c, k)
        D = ch.B + extra
        regimes = ["stride", "dilate"]
        if slide_feasible(ch, D):
            regimes += ["slide", "stitch"]
        if (D - ch.B) % ch.kL == 0:
            regimes.append("relax")
        for regime in regimes:
            ec = count_eval(regime, ch, D)
            assert ec.agrees, (regime, ec)
            assert (ec.f_predicted, ec.g_predicted) == predicted_counts(regime, ch, D)
        for level, entry in chain_dims(ch, D).mixed.items():
            if not isinstance(entry, str):
                assert count_eval("mixed", ch, D, level=level).agrees
        if slide_feasible(ch, D):
            s, t = count_eval("stride", ch, D), count_eval("slide", ch, D)
            for j in range(1, ch.L + 1):
                assert measured_ratio(s, t, j, "f") == speedup(ch, D, j, "f")
                assert measured_ratio(s, t, j, "g") == speedup(ch, D, j, "g")


class TestReport:
    def test_monotone_and_bounded(self, sum_max_chain):
        rows = emit_report(sum_max_chain, 6, 14, 2)
        assert {r.D for r in rows} == {6, 8, 10, 12, 14}
        slide_rows = [r for r in rows if r.regime == "slide"]
        assert all(r.monotone_f and r.monotone_g for r in rows)
        assert all(r.S_f < r.limit_f for r in slide_rows)
        assert all(r.f_measured == r.f_predicted and r.g_measured == r.g_predicted for r in rows)

    def test_step_validation(self, sum_max_chain):
        with pytest.raises(ValueError):
            emit_report(sum_max_chain, 6, 10, 0)
