"""Text form of algebraic normal forms, and the bundled function corpus.

Grammar::

    expression := term (('⊕' | '+' | '^') term)*
    term       := '0' | '1' | variable+
    variable   := 'x' <decimal index >= 1>

Whitespace between tokens is ignored, juxtaposed variables multiply, and
coefficients live in F_2 (a repeated term cancels).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .boolfun import MAX_VARS, Anf, TruthTable, anf_to_tt

_OPS = "⊕+^"


class AnfSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def parse_anf(text: str, declared_n: int | None = None) -> Anf:
    monomials: set[int] = set()
    max_index = 0
    pos = 0
    length = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < length and text[pos].isspace():
            pos += 1

    def parse_term() -> int:
        nonlocal pos, max_index
        skip_ws()
        if pos >= length:
            raise AnfSyntaxError("expected a term", pos)
        ch = text[pos]
        if ch in "01":
            pos += 1
            return -1 if ch == "0" else 0
        if ch != "x":
            raise AnfSyntaxError(f"unexpected character {ch!r}", pos)
        mask = 0
        while pos < length and text[pos] == "x":
            start = pos
            pos += 1
            digits_at = pos
            while pos < length and text[pos].isdigit():
                pos += 1
            if pos == digits_at:
                raise AnfSyntaxError("variable needs a decimal index", digits_at)
            index = int(text[digits_at:pos])
            if index < 1:
                raise AnfSyntaxError("variable index must be >= 1", start)
            if index > MAX_VARS:
                raise AnfSyntaxError(f"variable index {index} exceeds {MAX_VARS}", start)
            if declared_n is not None and index > declared_n:
                raise AnfSyntaxError(f"variable x{index} exceeds declared n={declared_n}", start)
            max_index = max(max_index, index)
            mask |= 1 << (index - 1)
            skip_ws()
        return mask

    while True:
        term = parse_term()
        if term >= 0:
            monomials ^= {term}
        skip_ws()
        if pos >= length:
            break
        if text[pos] not in _OPS:
            raise AnfSyntaxError(f"expected operator, found {text[pos]!r}", pos)
        pos += 1

    n = declared_n if declared_n is not None else max_index
    return Anf(n, frozenset(monomials))


def _monomial_text(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"x{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)


def print_anf(anf: Anf) -> str:
    if not anf.monomials:
        return "0"
    terms = sorted(anf.monomials, key=lambda m: (m.bit_count(), m))
    return " ⊕ ".join(_monomial_text(m) for m in terms)


# --- corpus ------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    """A checkable statement about a corpus function.

    ``kind`` is ``alpha`` / ``alpha_nl`` (minimum over k-flats) or
    ``bad_flats`` / ``bad_flats_nl`` (count of flats below ``threshold``).
    ``op`` is ``eq`` or ``ge``.
    """

    kind: str
    k: int
    value: int
    op: str = "eq"
    threshold: int | None = None
    total: int | None = None

    def describe(self) -> str:
        sym = "=" if self.op == "eq" else ">="
        if self.kind.startswith("bad_flats"):
            tail = f" of {self.total}" if self.total is not None else ""
            return f"{self.kind}(k={self.k}, threshold={self.threshold}) {sym} {self.value}{tail}"
        return f"{self.kind}(k={self.k}) {sym} {self.value}"


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    n: int
    anf: Anf
    claims: tuple[Claim, ...] = field(default_factory=tuple)

    def truth_table(self) -> TruthTable:
        return anf_to_tt(self.anf)


_CLAIM_KINDS = {"alpha", "alpha_nl", "bad_flats", "bad_flats_nl"}


def _parse_claim(text: str) -> Claim:
    fields = dict(part.split("=", 1) for part in text.split())
    kind = fields.pop("claim")
    if kind not in _CLAIM_KINDS:
        raise ValueError(f"unknown claim kind {kind!r}")
    op = fields.pop("op", "eq")
    if op not in ("eq", "ge"):
        raise ValueError(f"unknown claim operator {op!r}")
    ints = {key: int(val) for key, val in fields.items()}
    return Claim(kind=kind, op=op, **ints)


def parse_corpus_file(text: str) -> CorpusEntry:
    meta: dict[str, str] = {}
    claims: list[Claim] = []
    body: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            content = stripped[1:].strip()
            if content.startswith("claim="):
                claims.append(_parse_claim(content))
            elif "=" in content:
                key, val = content.split("=", 1)
                meta[key.strip()] = val.strip()
        elif stripped:
            body.append(stripped)
    if "id" not in meta or "n" not in meta:
        raise ValueError("corpus file needs '# id=' and '# n=' header lines")
    n = int(meta["n"])
    anf = parse_anf(" ".join(body), declared_n=n)
    return CorpusEntry(meta["id"], n, anf, tuple(claims))


def thm22_witness(n: int) -> TruthTable:
    """1 exactly on the points of Hamming weight at most one."""
    if n < 2:
        raise ValueError("witness needs n >= 2")
    bits = [1 if x & (x - 1) == 0 else 0 for x in range(1 << n)]
    return TruthTable(n, bits)


def thm22_entry(n: int) -> CorpusEntry:
    from .boolfun import mobius

    tt = thm22_witness(n)
    claim = Claim("alpha", k=n - 1, value=n - 2, op="ge")
    return CorpusEntry(f"thm22_witness_{n}", n, mobius(tt), (claim,))


CORPUS_IDS = ("f_7_4", "f_8_5", "conj_k2", "conj_k3", "conj_k4", "conj_k5")


def load_corpus_dir(directory: Path | str) -> list[CorpusEntry]:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    files = sorted(directory.glob("*.anf"))
    if not files:
        raise FileNotFoundError(f"no .anf files in {directory}")
    return [parse_corpus_file(p.read_text(encoding="utf-8")) for p in files]


def corpus(witness_ns: Iterable[int] = (6,), directory: Path | str | None = None) -> list[CorpusEntry]:
    """Bundled example functions (in ``CORPUS_IDS`` order) plus generated witnesses."""
    if directory is None:
        with resources.as_file(resources.files("flatdeg") / "data" / "corpus") as path:
            entries = load_corpus_dir(path)
    else:
        entries = load_corpus_dir(directory)
    rank = {cid: i for i, cid in enumerate(CORPUS_IDS)}
    entries.sort(key=lambda e: (rank.get(e.id, len(rank)), e.id))
    return entries + [thm22_entry(n) for n in witness_ns]


def corpus_entry(entry_id: str, directory: Path | str | None = None) -> CorpusEntry:
    if entry_id.startswith("thm22_witness_"):
        return thm22_entry(int(entry_id.rsplit("_", 1)[1]))
    for entry in corpus(witness_ns=(), directory=directory):
        if entry.id == entry_id:
            return entry
    raise KeyError(f"no corpus entry {entry_id!r}")
