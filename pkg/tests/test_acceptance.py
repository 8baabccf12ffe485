"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import itertools
import time
from fractions import Fraction

import pytest

from densescan import (
    FilterBank,
    FragmentedSignal,
    MultiScaleConfig,
    binomial_lowpass,
    count_eval,
    defragment,
    dirichlet,
    fragment,
    ms_boundary,
    ms_downscale,
    nsf,
    speedup,
    speedup_limit,
    speedup_relax,
    speedup_relax_limit,
)
from densescan.chain import slide_feasible
from densescan.cli import main
from densescan.verify import (
    Manifest,
    SplitMix64,
    Suites,
    check_chain_case,
    check_multiscale,
    check_planar,
    check_transposed,
    check_transposed_lengths,
    iter_chain_cases,
    random_chain_case,
)

from conftest import bits, record_criterion

CORPUS = Manifest(seed=1, trials=300, max_layers=3, max_c=3, max_k=3, max_d=64)


def summarize(suites, names):
    """(ok, detail) for the named suites; a suite that ran no trials counts as a failure."""
    bad = [n for n in names if suites[n].failures or suites[n].trials == 0]
    detail = ", ".join(f"{n} {suites[n].trials}t/{suites[n].checks}c/{suites[n].failures}f" for n in names)
    for n in bad:
        if suites[n].first_failure:
            detail += f"; first failure in {n}: {suites[n].first_failure}"
    return not bad, detail


@pytest.fixture(scope="module")
def corpus():
    suites = Suites()
    numeric = 0
    start = time.perf_counter()
    for case, rng in iter_chain_cases(CORPUS):
        numeric += case.kind in ("int", "float")
        check_chain_case(case, rng, suites, CORPUS.max_d)
    return suites, numeric, time.perf_counter() - start


def test_criterion_01_exactness(corpus):
    suites, numeric, elapsed = corpus
    ok, detail = summarize(suites, ["exact-scan", "stuffing-bound"])
    ok = ok and numeric >= 200 and elapsed < 60.0
    record_criterion(1, "exact_scan equals per-subsignal patch mode", ok,
                     f"{numeric} numeric chains, {elapsed:.1f}s for the whole corpus; {detail}")
    assert ok


def test_criterion_02_regime_equivalences(corpus):
    suites, _, _ = corpus
    names = ["dilate", "relaxed-scan", "stitch-columns", "stitch-dense", "mixed-scan-trim", "mixed-scan-stuff"]
    ok, detail = summarize(suites, names)
    trim, stuff = suites.counters["mixed-trim"], suites.counters["mixed-stuff"]
    ok = ok and trim >= 20 and stuff >= 20
    record_criterion(2, "dilate, relaxed, stitch and mixed regimes agree bitwise", ok,
                     f"mixed branches trim={trim} stuff={stuff}; {detail}")
    assert ok


def test_criterion_03_zeta_independence(corpus):
    suites, _, _ = corpus
    ok, detail = summarize(suites, ["zeta-independence"])
    stuffed = suites.counters["stuffed-exact"]
    ok = ok and stuffed > 0
    record_criterion(3, "stuffed outputs do not depend on the dummy value", ok,
                     f"{stuffed} stuffed exact scans; {detail}")
    assert ok


def test_criterion_04_fragmentation_algebra():
    checks = 0
    failures = []
    for k in (2, 3, 6):
        for q in range(k, 13, k):
            for s in range(1, 7):
                chi = FragmentedSignal(q, s, range(q * s))
                fr = fragment(k, chi)
                checks += 1
                if defragment(k, fr) != chi:
                    failures.append(("inverse", k, q, s))
                for mu, nu in itertools.product(range(1, q + 1), range(1, s + 1)):
                    checks += 1
                    if chi.at(mu, nu) != fr.at((mu - 1) // k + 1, ((mu - 1) % k) * s + nu):
                        failures.append(("index-law", k, q, s, mu, nu))
                for k2 in (2, 3, 6):
                    if q % (k * k2) == 0:
                        checks += 2
                        if fragment(k2, fr) != fragment(k * k2, chi):
                            failures.append(("composition", k, k2, q, s))
                        if fragment(k2, fr) != fragment(k, fragment(k2, chi)):
                            failures.append(("commutativity", k, k2, q, s))
    ok = not failures
    record_criterion(4, "fragmentation algebra, exhaustive up to 12x6", ok,
                     f"{checks} checks, {len(failures)} failures" + (f"; first {failures[0]}" if failures else ""))
    assert ok


def test_criterion_05_dimension_formulas(corpus):
    suites, _, _ = corpus
    ok, detail = summarize(suites, ["dims-slide", "dims-dilate", "dims-relax", "dims-mixed", "dims-V-product"])
    record_criterion(5, "closed-form dimensions equal measured shapes", ok, detail)
    assert ok


def limit_gaps(chain):
    """Layers whose ratios at D = 10 k_L* B miss the asymptote by more than 1/D."""
    D = 10 * chain.kL * chain.B
    while not slide_feasible(chain, D):
        D += 1
    misses = []
    for j in range(1, chain.L + 1):
        for which in ("f", "g"):
            pairs = (
                (speedup(chain, D, j, which), speedup_limit(chain, j, which)),
                (speedup_relax(chain, D, j, which), speedup_relax_limit(chain, j, which)),
            )
            for value, limit in pairs:
                gap = abs(Fraction(limit) - value)
                if gap > Fraction(1, D):
                    misses.append((j, which, D, gap))
    return misses


def test_criterion_06_counts_and_speedups(corpus, sum_max_chain):
    suites, _, _ = corpus
    counts_ok, detail = summarize(
        suites,
        ["counts-stride", "counts-slide", "counts-dilate", "counts-relax", "counts-stitch", "counts-mixed",
         "speedup-ratios"],
    )
    stride = count_eval("stride", sum_max_chain, 6)
    slide = count_eval("slide", sum_max_chain, 6)
    anchor_ok = (
        stride.f_measured == (8,) and slide.f_measured == (5,) and speedup(sum_max_chain, 6, 1, "f") == Fraction(8, 5)
    )
    # the asymptote clause, taken literally
    chains = [sum_max_chain] + [
        random_chain_case(SplitMix64(t), t).chain for t in range(60) if t % 3 != 2
    ]
    misses = [(n, m) for n, c in enumerate(chains) for m in limit_gaps(c)]
    anchor_gap = limit_gaps(sum_max_chain)
    ok = counts_ok and anchor_ok and not misses
    parts = [
        f"counts and exact ratios {'ok' if counts_ok else 'FAILED'}",
        f"anchor f-counts 8 and 5, S_f = 8/5, {'ok' if anchor_ok else 'FAILED'}",
        f"1/D limit clause missed on {len({n for n, _ in misses})}/{len(chains)} chains",
    ]
    if anchor_gap:
        j, which, D, gap = anchor_gap[0]
        parts.append(f"sum/max chain at D={D}: S_{which} gap {gap} > 1/{D}")
    record_criterion(6, "evaluation counts and speedup ratios", ok, "; ".join(parts) + f"; {detail}")
    assert counts_ok and anchor_ok
    assert not misses, "S_f approaches its limit like 1/D times (u-c)(u-c+1), so the 1/D bound cannot hold"


def test_criterion_07_multiscale():
    suites = Suites()
    rng = SplitMix64(CORPUS.seed)
    for t in range(150):
        check_multiscale(rng, suites, t)
    cfg = MultiScaleConfig(2, binomial_lowpass(), dirichlet(0.0), 5)
    pi = ms_downscale(cfg, [float(v) for v in range(1, 10)])
    anchors = ms_boundary(5, 2, 3) == (6, 3) and (cfg.R_tilde, cfg.R) == (6, 3) and len(pi) == 7
    ok, detail = summarize(
        suites,
        ["multiscale-centering", "multiscale-length", "multiscale-index", "multiscale-subsignal", "multiscale-scan"],
    )
    ok = ok and anchors
    record_criterion(7, "multi-scale lemma and downscale-once scan", ok,
                     f"figure anchors {'ok' if anchors else 'FAILED'}; {detail}")
    assert ok


def test_criterion_08_transposed():
    suites = Suites()
    check_transposed_lengths(suites)
    rng = SplitMix64(CORPUS.seed)
    for t in range(200):
        check_transposed(rng, suites, t)
    ok, detail = summarize(suites, ["trconv-length", "zoh-theorem", "duc-theorem"])
    record_criterion(8, "transposed convolution length, ZOH and DUC theorems", ok, detail)
    assert ok


def test_criterion_09_planar():
    suites = Suites()
    rng = SplitMix64(CORPUS.seed)
    for t in range(150):
        check_planar(rng, suites, t)
    ok, detail = summarize(suites, ["exact-scan-2d"])
    record_criterion(9, "2D exact scan equals the per-patch oracle", ok, detail)
    assert ok


def test_criterion_10_cli(tmp_path, capsys):
    reports = []
    codes = []
    for n in (1, 2):
        out = tmp_path / f"verify{n}.txt"
        codes.append(main(["verify", "--output", str(out)]))
        reports.append(out.read_bytes())
    capsys.readouterr()
    verify_ok = codes == [0, 0] and reports[0] == reports[1]

    chain = tmp_path / "chain.json"
    chain.write_text(
        '{"channels": 1, "dummy": 0, "layers": ['
        '{"kind": "conv", "weights": [[[0.5]], [[-1.25]], [[2.0]]]}, {"kind": "pool-max", "size": 2},'
        '{"kind": "conv", "weights": [[[1.5]], [[0.75]]]}, {"kind": "pool-avg", "size": 2}]}'
    )
    rng = SplitMix64(7)
    pairs_ok = True
    for D in range(9, 30):
        src = tmp_path / "in.nsf"
        nsf.write(src, nsf.from_signal([(rng.uniform(-1.0, 1.0) + 0.0,) for _ in range(D)]))
        files = {}
        for mode in ("exact", "dilate", "stitch", "relaxed-scan", "mixed:1"):
            dst = tmp_path / f"{mode.replace(':', '')}.nsf"
            code = main(["scan", "--chain", str(chain), "--input", str(src), "--output", str(dst), "--mode", mode])
            files[mode] = dst.read_bytes() if code == 0 else None
        capsys.readouterr()
        exact = nsf.to_signal(nsf.loads(files["exact"].decode()))
        pairs_ok &= files["dilate"] == files["exact"]
        if files["stitch"] is not None:
            pairs_ok &= files["stitch"] == files["exact"]
        pairs_ok &= files["relaxed-scan"] == nsf.dumps(nsf.from_signal(exact[::4])).encode()
        pairs_ok &= files["mixed:1"] == nsf.dumps(nsf.from_signal(exact[::2])).encode()

    specials = [(0.1,), (-0.0,), (5e-324,), (float("inf"),), (-1e308,), (1 / 3,)]
    text = nsf.dumps(nsf.from_signal(specials))
    w = FilterBank((((0.1, -0.0),), ((2.5e-310, 7.0),)))
    round_ok = (
        bits(nsf.to_signal(nsf.loads(text))) == bits(tuple(specials))
        and nsf.dumps(nsf.loads(text)) == text
        and bits(nsf.to_filter_bank(nsf.loads(nsf.dumps(nsf.from_filter_bank(w)))).weights) == bits(w.weights)
    )
    ok = verify_ok and pairs_ok and round_ok
    record_criterion(10, "CLI verify, scan mode pairs and NSF round-trip", ok,
                     f"verify exit codes {codes}, reproducible={reports[0] == reports[1]}; "
                     f"mode pairs {'ok' if pairs_ok else 'FAILED'}; round-trip {'ok' if round_ok else 'FAILED'}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
