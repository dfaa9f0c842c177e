import csv
import math
import random
from pathlib import Path

import pytest

import oracles
from flatdeg.analysis import Metric, exhaustive_g
from flatdeg.bounds import (
    BoundsOracle,
    KnownValue,
    conjecture_heuristic_log2,
    cor231_lower,
    lemma24_ceil,
    lemma24_valid,
    load_known_values,
    parse_known_values,
    render_tables,
    resolve_bounds,
    thm22_exact,
    thm23_holds,
    thm23_lower,
    thm23_nl_holds,
    thm23_nl_lower,
    thm25_upper,
)

GOLDEN = Path(__file__).parent / "golden"


def test_thm23_holds_examples():
    assert thm23_holds(7, 5, 2)  # 14 <= 1 + 5 + 10
    assert not thm23_holds(7, 5, 3)  # 14 > 1 + 5
    assert not thm23_holds(6, 5, 4)
    with pytest.raises(ValueError):
        thm23_holds(5, 5, 1)


def test_thm23_lower_examples():
    assert thm23_lower(7, 5) == 3
    assert thm23_lower(12, 6) == 2
    assert thm23_lower(3, 2) == 0
    with pytest.raises(ValueError):
        thm23_lower(4, 4)


def test_thm23_lower_is_one_past_largest_passing_d():
    for n in range(2, 20):
        for k in range(1, n):
            passing = [d for d in range(k) if thm23_holds(n, k, d)]
            assert thm23_lower(n, k) == (max(passing) + 1 if passing else 0)


def test_cor231_examples():
    assert cor231_lower(7, 5) == 3
    assert cor231_lower(9, 5) == 2
    assert cor231_lower(20, 5) == 0
    with pytest.raises(ValueError):
        cor231_lower(7, 4)


def test_cor231_never_beats_thm23():
    for k in range(5, 30):
        for n in range(k + 1, 3 * k * k):
            assert cor231_lower(n, k) <= thm23_lower(n, k)


def test_thm23_nl_lower_examples():
    assert [thm23_nl_lower(n, 6) for n in range(7, 13)] == [16, 12, 9, 7, 5, 3]
    assert thm23_nl_lower(9, 5) == 1
    assert thm23_nl_lower(7, 5) == 3
    assert thm23_nl_lower(10, 5) == 0
    with pytest.raises(ValueError):
        thm23_nl_holds(7, 6, 16)


def test_thm23_nl_boundary_by_hand():
    # (7, 6): exponent 64 - 7*2 - 2 = 48
    # and m = 15 is the last m allowed by m < 2^(k-2)
    assert sum(math.comb(64, i) for i in range(16)) <= 2**48
    # (12, 6): exponent 13; m = 2 passes, m = 3 fails
    assert 1 + 64 + math.comb(64, 2) <= 2**13 < 1 + 64 + math.comb(64, 2) + math.comb(64, 3)


def test_thm23_nl_lower_agrees_with_holds():
    for n in range(3, 16):
        for k in range(2, min(n, 9)):
            passing = [m for m in range(1 << (k - 2)) if thm23_nl_holds(n, k, m)]
            assert thm23_nl_lower(n, k) == (max(passing) + 1 if passing else 0)


def test_lemma24_examples():
    assert lemma24_ceil(2, 2, 3) == 2 == oracles.ceil_ratio(2, 2, 3)
    rnd = random.Random(5)
    for _ in range(100):
        a, b = rnd.randint(1, 20), rnd.randint(1, 20)
        assert lemma24_ceil(a, b, a + b) == 1
    with pytest.raises(ValueError):
        lemma24_ceil(3, 1, 3)


def test_lemma24_exhaustive_small():
    for a in range(65):
        for b in range(65):
            for c in range(max(a + 1, b), a + b + 1):
                if c > 64:
                    break
                assert lemma24_ceil(a, b, c) == oracles.ceil_ratio(a, b, c)


def test_thm25_examples():
    assert thm25_upper(4, 2) == 0
    assert thm25_upper(11, 4) == 1
    assert thm25_upper(12, 4) == 0
    assert thm25_upper(7, 4) == 4
    assert thm25_upper(13, 5) == 4
    with pytest.raises(ValueError):
        thm25_upper(3, 4)


def test_thm22_exact():
    assert thm22_exact(2) == 0
    assert thm22_exact(7) == 5
    assert thm22_exact(12) == 10
    with pytest.raises(ValueError):
        thm22_exact(1)


def test_resolve_examples():
    r = resolve_bounds(11, 4)
    assert (r.lo, r.hi) == (0, 1)
    assert r.cell() == "0 or 1"
    r = resolve_bounds(9, 5)
    assert (r.lo, r.hi) == (2, 3)
    assert r.cell() == "≥ 2"
    r = resolve_bounds(6, 4)
    assert (r.lo, r.hi) == (2, 2)


def test_resolve_provenance_names():
    allowed = {"trivial", "thm2.2", "thm2.3", "cor2.3.1", "thm2.5", "monotone-n", "degree-link"}
    for metric in Metric:
        for n in range(1, 13):
            for k in range(1, n + 1):
                r = resolve_bounds(n, k, metric)
                assert r.lo <= r.hi
                for c in r.provenance:
                    assert c.name in allowed or c.name.startswith("known-value:")
                assert r.lo == max(c.value for c in r.provenance if c.side == "lo")
                assert r.hi == min(c.value for c in r.provenance if c.side == "hi")


def test_provenance_values_are_reproducible():
    for n in range(2, 13):
        for k in range(1, n + 1):
            for c in resolve_bounds(n, k).provenance:
                if c.name == "thm2.3":
                    assert c.value == thm23_lower(n, k)
                elif c.name == "thm2.5":
                    assert c.value == thm25_upper(n, k)
                elif c.name == "cor2.3.1":
                    assert c.value == cor231_lower(n, k)
                elif c.name == "monotone-n":
                    assert c.value == resolve_bounds(n - 1, k).hi


@pytest.mark.parametrize("metric", list(Metric))
def test_resolve_monotone_in_n(metric):
    for k in range(1, 8):
        for n in range(k + 1, 25):
            assert resolve_bounds(n, k, metric).hi <= resolve_bounds(n - 1, k, metric).hi


@pytest.mark.parametrize("metric", list(Metric))
def test_bounds_contain_exhaustive_values(metric):
    for n in range(1, 5):
        for k in range(1, n + 1):
            r = resolve_bounds(n, k, metric)
            assert r.lo <= exhaustive_g(n, k, metric) <= r.hi


def test_resolve_precondition():
    with pytest.raises(ValueError):
        resolve_bounds(3, 4)
    with pytest.raises(ValueError):
        resolve_bounds(25, 3)


def test_known_values_db():
    db = load_known_values()
    assert KnownValue(Metric.DEGREE, 8, 4, "lower", 1, "Polujan et al. non-4-normal bent function") in db
    assert {(kv.n, kv.k, kv.value) for kv in db if kv.metric is Metric.NONLINEARITY and kv.n == kv.k} == {
        (2, 2, 1), (3, 3, 2), (4, 4, 6), (5, 5, 12), (6, 6, 28)
    }
    with pytest.raises(ValueError):
        parse_known_values("degree 5 3 maybe 1 x")


def test_oracle_without_db_degrades_to_lower_bounds():
    bare = BoundsOracle(known=[])
    assert bare.resolve(7, 5).cell() == "≥ 3"
    assert bare.resolve(8, 4).cell() == "≥ 0"
    doc = render_tables(12, 6, Metric.DEGREE, oracle=bare)
    assert doc.cells[(12, 6)] == "≥ 2"


def test_inconsistent_db_is_rejected():
    bogus = [KnownValue(Metric.DEGREE, 5, 3, "lower", 3, "bogus")]
    with pytest.raises(ValueError):
        BoundsOracle(known=bogus).resolve(5, 3)


def read_golden(name):
    with open(GOLDEN / name, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("metric, name", [(Metric.DEGREE, "table_degree"), (Metric.NONLINEARITY, "table_nonlinearity")])
def test_tables_match_golden(metric, name):
    doc = render_tables(12, 6, metric)
    assert doc.rows() == read_golden(f"{name}.csv")
    assert doc.to_csv() == (GOLDEN / f"{name}.csv").read_text(encoding="utf-8")
    assert doc.to_text() == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_table_cells():
    deg = render_tables(12, 6, Metric.DEGREE)
    assert deg.cells[(7, 5)] == "3"
    assert deg.cells[(12, 6)] == "≥ 2"
    assert render_tables(12, 6, Metric.NONLINEARITY).cells[(6, 6)] == "28"


def test_table_prefix_property():
    full = read_golden("table_degree.csv")
    small = render_tables(4, 6, Metric.DEGREE).rows()
    assert small == [row[:5] for row in full]


def test_heuristic_k2_by_formula():
    assert conjecture_heuristic_log2(2) == pytest.approx(16 + 140 * math.log2(7 / 8), rel=1e-12)


def test_heuristic_large_k_slope():
    slope = math.log2(2 / math.exp(4 / 3))
    for k in range(10, 41):
        assert conjecture_heuristic_log2(k) / 2 ** (k + 2) == pytest.approx(slope, rel=0.01)
    assert slope == pytest.approx(-0.9240, abs=1e-3)


def test_heuristic_decreasing():
    values = [conjecture_heuristic_log2(k) for k in range(2, 41)]
    assert all(b < a for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        conjecture_heuristic_log2(1)
