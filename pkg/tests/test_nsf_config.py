import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from densescan import FilterBank, FragmentedSignal, Image, ParseError, PreconditionError, eval_stride
from densescan import nsf
from densescan.config import chain_from_document, compose_sliding, load_chain

from conftest import bits, sum2

samples = st.floats(allow_nan=False) | st.sampled_from([-0.0, 5e-324, math.inf, -math.inf])


@given(st.integers(1, 3).flatmap(lambda m: st.lists(st.lists(samples, min_size=m, max_size=m).map(tuple), min_size=1, max_size=12)))
def test_signal_round_trip_bitwise(rows):
    t = nsf.from_signal(rows)
    back = nsf.loads(nsf.dumps(t))
    assert back == t and bits(back.samples) == bits(t.samples)
    assert bits(nsf.to_signal(back)) == bits(tuple(rows))


def test_scalar_signal_and_integers():
    t = nsf.loads("nsf 1 3 1\n1\n-2\n3.5\n")
    assert nsf.to_signal(t) == ((1.0,), (-2.0,), (3.5,))
    assert all(isinstance(v, float) for s in t.samples for v in s)


def test_fragmented_round_trip():
    chi = FragmentedSignal.from_rows([[(1.0,), (2.0,)], [(3.0,), (4.0,)], [(5.0,), (6.0,)]])
    text = nsf.dumps(nsf.from_fragmented(chi))
    assert text.startswith("nsf 2 3 2 1\n# fragments=2\n")
    assert nsf.to_fragmented(nsf.loads(text)) == chi


def test_image_and_filter_bank_round_trip():
    im = Image.from_rows([[(1.0,), (2.0,)], [(3.0,), (4.0,)]])
    assert nsf.to_image(nsf.loads(nsf.dumps(nsf.from_image(im)))) == im
    w = FilterBank((((1.0, 2.0), (3.0, 4.0)), ((5.0, 6.0), (7.0, 8.0)), ((9.0, -0.0), (0.5, 1e300))))
    t = nsf.from_filter_bank(w)
    assert t.dims == (3, 2, 2) and t.channels == 1
    assert bits(nsf.to_filter_bank(nsf.loads(nsf.dumps(t))).weights) == bits(w.weights)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "nfs 1 1 1\n1\n",
        "nsf 1 2 1\n1\n",
        "nsf 1 1 2\n1\n",
        "nsf 1 1 1\nnan\n",
        "nsf 1 1 1\nabc\n",
        "nsf 2 1 1\n1\n",
        "nsf 1 2 1\n# fragments=2\n1\n2\n",
    ],
)
def test_malformed_files(text):
    with pytest.raises(ParseError):
        nsf.loads(text)


def test_read_rejects_non_utf8(tmp_path):
    p = tmp_path / "bad.nsf"
    p.write_bytes(b"nsf 1 1 1\n\xff\n")
    with pytest.raises(ParseError):
        nsf.read(p)


class TestConfig:
    def test_running_example(self):
        doc = {"channels": 1, "dummy": 0, "B": 3, "layers": [
            {"kind": "conv", "weights": [[[1.0]], [[1.0]]]},
            {"kind": "pool-max", "size": 2},
        ]}
        ch = chain_from_document(doc)
        assert ch.B == 3 and ch.c == (2,) and ch.k == (2,)
        assert eval_stride(ch, [(1.0,), (2.0,), (3.0,)]) == ((5.0,),)

    def test_grouping(self):
        doc = {"channels": 1, "layers": [
            {"kind": "conv", "weights": [[[1.0]], [[1.0]]]},
            {"kind": "bias", "values": [1.0]},
            {"kind": "pointwise", "function": "relu"},
            {"kind": "conv", "weights": [[[1.0]], [[-1.0]]]},
            {"kind": "pool-avg", "size": 2},
            {"kind": "pointwise", "function": "square"},
        ]}
        ch = chain_from_document(doc)
        assert ch.c == (3, 1) and ch.k == (2, 1) and ch.B == 4

    def test_weights_from_file(self, tmp_path):
        w = FilterBank((((2.0,),),))
        nsf.write(tmp_path / "w.nsf", nsf.from_filter_bank(w))
        (tmp_path / "chain.json").write_text(json.dumps({"layers": [{"kind": "conv", "weights": "w.nsf"}]}))
        ch = load_chain(tmp_path / "chain.json")
        assert eval_stride(ch, [(3.0,)]) == ((6.0,),)

    @pytest.mark.parametrize(
        "doc",
        [
            [],
            {"layers": []},
            {"channels": 0, "layers": [{"kind": "bypass"}]},
            {"layers": [{"kind": "warp"}]},
            {"layers": [{"kind": "pointwise", "function": "cube"}]},
            {"layers": [{"kind": "pool-max", "size": 0}]},
            {"layers": [{"kind": "bias", "values": [1, 2]}]},
            {"channels": 2, "layers": [{"kind": "conv", "weights": [[[1.0]]]}]},
            {"layers": [{"kind": "conv", "weights": "missing.nsf"}]},
        ],
    )
    def test_rejects(self, doc, tmp_path):
        with pytest.raises(ParseError):
            chain_from_document(doc, tmp_path)

    def test_declared_B_mismatch_is_precondition(self):
        doc = {"B": 4, "layers": [{"kind": "conv", "weights": [[[1.0]], [[1.0]]]}, {"kind": "pool-max", "size": 2}]}
        with pytest.raises(PreconditionError):
            chain_from_document(doc)

    def test_compose_sliding(self):
        k = compose_sliding([sum2(), sum2()])
        assert k.arity == 3 and k((1, 2, 3)) == 8
