import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import random_tt
from flatdeg.anf_text import corpus_entry
from flatdeg.boolfun import (
    Anf,
    TruthTable,
    anf_to_tt,
    degree,
    mobius,
    mobius_rows,
    nonlinearity,
    parity_over,
    walsh,
)


def tables(max_n=8):
    return st.integers(0, max_n).flatmap(
        lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n).map(lambda b: TruthTable(n, b))
    )


def test_mobius_single_monomial():
    assert mobius(TruthTable(2, [0, 0, 0, 1])).monomials == {0b11}


@pytest.mark.parametrize("n", [0, 1, 3, 6])
def test_mobius_zero(n):
    assert mobius(TruthTable.zeros(n)).monomials == frozenset()


def test_mobius_f74_top_monomial():
    anf = mobius(corpus_entry("f_7_4").truth_table())
    assert anf.degree == 6
    assert 0b1011111 in anf.monomials  # x1x2x3x4x5x7


def test_anf_to_tt_small_cases():
    assert anf_to_tt(Anf(3, frozenset())) == TruthTable.zeros(3)
    assert anf_to_tt(Anf(2, frozenset({0}))) == TruthTable.constant(2, 1)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_anf_to_tt_matches_pointwise_evaluation(rng, n):
    for _ in range(20):
        mons = frozenset(np.flatnonzero(rng.integers(0, 2, 1 << n)).tolist())
        tt = anf_to_tt(Anf(n, mons))
        assert tt.bits.tolist() == oracles.eval_anf(mons, n)
        assert mobius(tt).monomials == mons


def test_degree_examples():
    assert degree(TruthTable.constant(4, 1)) == 0
    assert degree(TruthTable.zeros(4)) == 0
    # x1 + x2 + 1
    assert degree(TruthTable(2, [1, 0, 0, 1])) == 1
    assert degree(corpus_entry("f_8_5").truth_table()) == 7


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_degree_matches_subset_sum_oracle(rng, n):
    for _ in range(20):
        tt = random_tt(rng, n)
        assert degree(tt) == oracles.degree(tt.bits.tolist())


def test_walsh_examples():
    assert walsh(TruthTable.zeros(2)).coefficients == (4, 0, 0, 0)
    assert walsh(TruthTable(1, [0, 1])).coefficients == (0, 2)


def test_walsh_bent_flat_spectrum():
    bent = TruthTable.from_function(4, lambda x: (x & 1) * (x >> 1 & 1) ^ (x >> 2 & 1) * (x >> 3 & 1))
    coeffs = walsh(bent).coefficients
    assert coeffs == tuple(oracles.walsh(bent.bits.tolist()))
    assert {abs(c) for c in coeffs} == {4}


@pytest.mark.parametrize("n", [1, 3, 5])
def test_walsh_matches_double_loop(rng, n):
    for _ in range(10):
        tt = random_tt(rng, n)
        assert list(walsh(tt).coefficients) == oracles.walsh(tt.bits.tolist())


def test_nonlinearity_examples():
    affine = TruthTable.from_function(5, lambda x: (x ^ (x >> 3)) & 1 ^ 1)
    assert nonlinearity(affine) == 0
    bent = TruthTable.from_function(4, lambda x: (x & 1) * (x >> 1 & 1) ^ (x >> 2 & 1) * (x >> 3 & 1))
    assert nonlinearity(bent) == 6


def test_nonlinearity_matches_affine_distance_oracle(rng):
    for _ in range(30):
        tt = random_tt(rng, 4)
        assert nonlinearity(tt) == oracles.nonlinearity(tt.bits.tolist())


def test_nonlinearity_rejects_n0():
    with pytest.raises(ValueError):
        nonlinearity(TruthTable(0, [1]))


def test_parity_over():
    n = 5
    monomial = TruthTable.from_function(n, lambda x: int(x == (1 << n) - 1))
    assert parity_over(monomial, []) == 0
    assert parity_over(monomial, range(1 << n)) == 1
    even = TruthTable(3, [1, 1, 0, 0, 0, 1, 1, 0])
    assert parity_over(even, range(8)) == 0
    with pytest.raises(IndexError):
        parity_over(even, [8])


@settings(max_examples=200, deadline=None)
@given(tables())
def test_mobius_involution(tt):
    once = mobius_rows(tt.bits.copy())
    assert np.array_equal(mobius_rows(once), tt.bits)


@pytest.mark.parametrize("n", range(1, 9))
def test_mobius_round_trip_1000(n):
    rng = np.random.default_rng(n)
    batch = rng.integers(0, 2, size=(1000, 1 << n), dtype=np.uint8)
    anf = mobius_rows(batch.copy())
    assert np.array_equal(mobius_rows(anf.copy()), batch)
    # spot-check through the value types
    for row in batch[:5]:
        tt = TruthTable(n, row)
        assert anf_to_tt(mobius(tt)) == tt


@settings(max_examples=200, deadline=None)
@given(tables())
def test_parseval(tt):
    coeffs = np.array(walsh(tt).coefficients, dtype=np.int64)
    assert int((coeffs**2).sum()) == 1 << (2 * tt.n)
    assert np.all(coeffs % 2 == (1 << tt.n) % 2)
    assert np.all(np.abs(coeffs) <= 1 << tt.n)


@settings(max_examples=100, deadline=None)
@given(tables(max_n=8).filter(lambda t: t.n >= 1), st.integers(0, 255), st.integers(0, 1))
def test_nonlinearity_affine_invariance(tt, a, c):
    a &= (1 << tt.n) - 1
    aff = TruthTable.from_function(tt.n, lambda x: bin(a & x).count("1") + c)
    assert nonlinearity(tt ^ aff) == nonlinearity(tt)


@settings(max_examples=200, deadline=None)
@given(tables())
def test_full_degree_iff_odd_weight(tt):
    assert (degree(tt) == tt.n and tt.n > 0) == (tt.n > 0 and parity_over(tt, range(len(tt))) == 1)


def test_hex_format():
    tt = TruthTable(2, [1, 1, 1, 0])
    assert tt.to_hex() == "07"
    assert TruthTable.from_hex("07", 2) == tt
    big = TruthTable.from_function(4, lambda x: x == 9)
    assert big.to_hex() == "0002"  # bit 9 = bit 1 of byte 1
    assert TruthTable.from_hex("0002") == big
    with pytest.raises(ValueError):
        TruthTable.from_hex("1f", 2)  # bit 4 is unused for a 4-bit table
    with pytest.raises(ValueError):
        TruthTable.from_hex("zz")


def test_truth_table_rejects_bad_input():
    with pytest.raises(ValueError):
        TruthTable(2, [0, 1, 0])
    with pytest.raises(ValueError):
        TruthTable(25, [])
    with pytest.raises(ValueError):
        Anf(2, frozenset({4}))
