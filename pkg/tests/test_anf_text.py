import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatdeg.anf_text import (
    CORPUS_IDS,
    AnfSyntaxError,
    Claim,
    corpus,
    corpus_entry,
    parse_anf,
    parse_corpus_file,
    print_anf,
    thm22_witness,
)
from flatdeg.boolfun import Anf


def test_parse_conjecture_k2_function():
    anf = parse_anf("x1x2x3 ⊕ x1x4 ⊕ x2", declared_n=4)
    assert anf.n == 4
    assert anf.monomials == {0b0111, 0b1001, 0b0010}


def test_parse_constants_and_cancellation():
    assert parse_anf("0").monomials == frozenset()
    assert parse_anf("x1 ⊕ x1").monomials == frozenset()
    assert parse_anf("1", declared_n=3).monomials == {0}
    assert parse_anf("1 + 1 + x2").monomials == {0b10}


def test_parse_repeated_variable_is_idempotent():
    assert parse_anf("x1x1x2").monomials == {0b11}


def test_parse_infers_n_from_largest_index():
    assert parse_anf("x2 + x7x3").n == 7


def test_parse_whitespace_and_operators_agree():
    texts = ["x1x2 ⊕ x3", "x1x2+x3", "x1 x2 ^ x3", " x1x2\n+\tx3 "]
    results = {parse_anf(t).monomials for t in texts}
    assert results == {frozenset({0b11, 0b100})}


@pytest.mark.parametrize(
    "text, pos",
    [("", 0), ("x1 +", 4), ("x", 1), ("x1 * x2", 3), ("x0", 0), ("y1", 0), ("x1 x2 x", 7)],
)
def test_parse_syntax_errors_carry_position(text, pos):
    with pytest.raises(AnfSyntaxError) as info:
        parse_anf(text)
    assert info.value.position == pos


def test_parse_rejects_index_beyond_declared_n():
    with pytest.raises(AnfSyntaxError):
        parse_anf("x1x5", declared_n=4)
    with pytest.raises(AnfSyntaxError):
        parse_anf("x25")


def test_print_anf_ordering():
    assert print_anf(Anf(3, frozenset())) == "0"
    assert print_anf(Anf(3, frozenset({0b11, 0b100}))) == "x3 ⊕ x1x2"
    assert print_anf(Anf(2, frozenset({0, 0b10}))) == "1 ⊕ x2"


@pytest.mark.parametrize("n", range(1, 9))
def test_print_parse_round_trip_1000(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(1000):
        mons = frozenset(np.flatnonzero(rng.integers(0, 2, 1 << n)).tolist())
        anf = Anf(n, mons)
        assert parse_anf(print_anf(anf), declared_n=n) == anf


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 255)))
def test_print_parse_round_trip_property(mons):
    anf = Anf(8, frozenset(mons))
    assert parse_anf(print_anf(anf), declared_n=8).monomials == anf.monomials


def test_corpus_contents():
    entries = {e.id: e for e in corpus()}
    assert set(CORPUS_IDS) <= entries.keys()
    assert "thm22_witness_6" in entries
    assert entries["conj_k2"].n == 4
    assert entries["conj_k2"].claims == (Claim("bad_flats", k=2, value=10, threshold=1, total=140),)
    assert entries["f_7_4"].claims == (Claim("alpha", k=4, value=2),)
    assert entries["conj_k5"].claims[0].value == 73
    assert entries["conj_k5"].claims[0].total == 10668
    # term counts of the two long listings
    assert len(entries["f_7_4"].anf) == 34
    assert len(entries["f_8_5"].anf) == 72


def test_corpus_entries_round_trip_through_printer():
    for entry in corpus(witness_ns=(4,)):
        assert parse_anf(print_anf(entry.anf), declared_n=entry.n).monomials == entry.anf.monomials


def test_corpus_entry_lookup():
    assert corpus_entry("f_8_5").n == 8
    assert corpus_entry("thm22_witness_5").n == 5
    with pytest.raises(KeyError):
        corpus_entry("nope")


def test_corpus_file_format():
    text = "# id=demo\n# n=3\n# claim=alpha k=2 op=ge value=1\nx1x2\n⊕ x3\n"
    entry = parse_corpus_file(text)
    assert entry.id == "demo" and entry.n == 3
    assert entry.claims == (Claim("alpha", k=2, value=1, op="ge"),)
    assert entry.anf.monomials == {0b11, 0b100}
    with pytest.raises(ValueError):
        parse_corpus_file("x1\n")


def test_missing_corpus_dir(tmp_path):
    with pytest.raises(FileNotFoundError):
        corpus(directory=tmp_path / "missing")


def test_thm22_witness():
    w2 = thm22_witness(2)
    assert w2.bits.tolist() == [1, 1, 1, 0]
    assert thm22_witness(5).weight() == 6
    with pytest.raises(ValueError):
        thm22_witness(1)
