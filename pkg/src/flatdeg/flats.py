"""Affine subspaces (flats) of F_2^n: canonical form, counting, enumeration.

A flat is stored as an RREF basis (pivot of a row = its lowest set bit,
pivots increasing, pivot columns cleared in the other rows) plus an offset
whose pivot bits are all zero.  That representative is unique per point set.

Enumeration order: pivot-column sets in ``itertools.combinations`` order,
then the free RREF entries read as a binary word (first free entry in
row-major, column-ascending order is the most significant bit), then the
reduced offsets in increasing numeric order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .boolfun import MAX_VARS, TruthTable

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured flat budget."""


def gaussian_binomial2(n: int, k: int) -> int:
    """Number of k-dimensional linear subspaces of F_2^n."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (k - i)) - 1
    return num // den


def count_flats(n: int, k: int) -> int:
    return gaussian_binomial2(n, k) << (n - k)


def check_budget(n: int, k: int, budget: int | None = None) -> int:
    total = count_flats(n, k)
    limit = DEFAULT_BUDGET if budget is None else budget
    if total > limit:
        raise BudgetExceeded(f"{total} flats of dimension {k} in F_2^{n} exceed budget {limit}")
    return total


@dataclass(frozen=True)
class Flat:
    n: int
    k: int
    basis: tuple[int, ...]
    offset: int

    def points(self) -> np.ndarray:
        """Points ordered by coordinate index: entry ``c`` is offset + sum of basis[j] for bits j of c."""
        pts = np.zeros(1 << self.k, dtype=np.intp)
        pts[0] = self.offset
        for j, b in enumerate(self.basis):
            h = 1 << j
            pts[h : 2 * h] = pts[:h] ^ b
        return pts

    def point_set(self) -> frozenset[int]:
        return frozenset(self.points().tolist())

    def __contains__(self, point: int) -> bool:
        return _reduce(point, self.basis) == self.offset

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple((b & -b).bit_length() - 1 for b in self.basis)

    def to_text(self) -> str:
        basis = ",".join(format(b, "x") for b in self.basis)
        return f"n={self.n} k={self.k} basis={basis} offset={self.offset:x}"

    @classmethod
    def from_text(cls, text: str) -> "Flat":
        m = re.fullmatch(
            r"\s*n=(\d+)\s+k=(\d+)\s+basis=([0-9a-fA-F,]*)\s+offset=([0-9a-fA-F]+)\s*", text
        )
        if not m:
            raise ValueError(f"malformed flat text: {text!r}")
        n, k = int(m[1]), int(m[2])
        basis = [int(b, 16) for b in m[3].split(",") if b]
        flat = canonicalize(basis, int(m[4], 16), n=n)
        if flat.k != k:
            raise ValueError(f"declared k={k} but basis has {flat.k} rows")
        return flat

    def __str__(self) -> str:
        return self.to_text()


def _reduce(vec: int, rref: Sequence[int]) -> int:
    for row in rref:
        if vec & row & -row:
            vec ^= row
    return vec


def canonicalize(basis: Sequence[int], offset: int, *, n: int) -> Flat:
    """Canonical representative of the flat ``offset + span(basis)``."""
    if not 0 <= n <= MAX_VARS:
        raise ValueError(f"n out of range: {n}")
    limit = 1 << n
    rows = [int(b) for b in basis]
    for v in [*rows, offset]:
        if not 0 <= v < limit:
            raise ValueError(f"mask {v:#x} out of range for n={n}")
    rref: list[int] = []
    for col in range(n):
        bit = 1 << col
        pivot = next((i for i, r in enumerate(rows) if r & bit), None)
        if pivot is None:
            continue
        prow = rows.pop(pivot)
        rows = [r ^ prow if r & bit else r for r in rows]
        rref = [r ^ prow if r & bit else r for r in rref]
        rref.append(prow)
    if rows:
        raise ValueError("basis rows are linearly dependent")
    return Flat(n, len(rref), tuple(rref), _reduce(int(offset), rref))


def full_space(n: int) -> Flat:
    return Flat(n, n, tuple(1 << i for i in range(n)), 0)


# --- vectorized enumeration ------------------------------------------------------


def span_rows(bases: np.ndarray) -> np.ndarray:
    """All 2**k combinations of each basis row-set; shape (B, 2**k)."""
    b, k = bases.shape
    span = np.zeros((b, 1 << k), dtype=np.intp)
    for j in range(k):
        h = 1 << j
        span[:, h : 2 * h] = span[:, :h] ^ bases[:, j : j + 1]
    return span


def _subset_sums(cols: Sequence[int]) -> np.ndarray:
    """All masks supported on ``cols``, ascending."""
    out = np.zeros(1 << len(cols), dtype=np.intp)
    for i, c in enumerate(cols):
        h = 1 << i
        out[h : 2 * h] = out[:h] | (1 << c)
    return out


def _subspace_chunks(n: int, k: int, chunk: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Yield (pivots, bases) with bases an array of shape (B, k) of RREF rows."""
    for pivots in itertools.combinations(range(n), k):
        pset = set(pivots)
        free = [(j, c) for j, p in enumerate(pivots) for c in range(p + 1, n) if c not in pset]
        nf = len(free)
        base = np.array([1 << p for p in pivots], dtype=np.intp)
        total = 1 << nf
        for lo in range(0, total, chunk):
            t = np.arange(lo, min(total, lo + chunk), dtype=np.intp)
            bases = np.broadcast_to(base, (t.size, k)).copy()
            for i, (j, c) in enumerate(free):
                bases[:, j] |= ((t >> (nf - 1 - i)) & 1) << c
            yield pivots, bases


@dataclass
class FlatBlock:
    """A contiguous range of flats in enumeration order.

    Row ``r`` of ``points`` is the flat with basis ``bases[r // len(offsets)]``
    and offset ``offsets[r % len(offsets)]``; ``start`` is its global index.
    """

    n: int
    k: int
    start: int
    bases: np.ndarray
    offsets: np.ndarray
    points: np.ndarray
    row_offset: int = 0

    def __len__(self) -> int:
        return self.points.shape[0]

    def flat(self, row: int) -> Flat:
        r = row + self.row_offset
        noff = self.offsets.size
        basis = tuple(int(b) for b in self.bases[r // noff])
        return Flat(self.n, self.k, basis, int(self.offsets[r % noff]))


def iter_blocks(
    n: int,
    k: int,
    *,
    start: int = 0,
    stop: int | None = None,
    max_rows: int = 1 << 16,
    budget: int | None = None,
) -> Iterator[FlatBlock]:
    """Stream flats with global indices in ``[start, stop)`` as point blocks."""
    total = check_budget(n, k, budget)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    noff = 1 << (n - k)
    chunk = max(1, max_rows // noff)
    pos = 0
    for pivots, bases in _subspace_chunks(n, k, chunk):
        rows = bases.shape[0] * noff
        if pos + rows <= start:
            pos += rows
            continue
        if pos >= stop:
            return
        nonpivots = [c for c in range(n) if c not in pivots]
        offsets = _subset_sums(nonpivots)
        lo = max(start - pos, 0)
        hi = min(stop - pos, rows)
        # only materialize the subspaces that the window touches
        s_lo, s_hi = lo // noff, (hi - 1) // noff + 1
        sub = bases[s_lo:s_hi]
        pts = (span_rows(sub)[:, None, :] ^ offsets[None, :, None]).reshape(-1, 1 << k)
        r0 = lo - s_lo * noff
        yield FlatBlock(n, k, pos + lo, sub, offsets, pts[r0 : r0 + hi - lo], r0)
        pos += rows


def partition(n: int, k: int, parts: int, budget: int | None = None) -> list[tuple[int, int]]:
    """Split the flat index range into ``parts`` disjoint contiguous ranges."""
    total = check_budget(n, k, budget)
    parts = max(1, min(parts, total))
    edges = [total * i // parts for i in range(parts + 1)]
    return list(zip(edges[:-1], edges[1:]))


def enumerate_flats(n: int, k: int, budget: int | None = None) -> Iterator[Flat]:
    for block in iter_blocks(n, k, budget=budget):
        for r in range(len(block)):
            yield block.flat(r)


def subspace_bases(n: int, k: int, budget: int | None = None) -> np.ndarray:
    """All RREF bases of k-dimensional subspaces, shape (S, k), in enumeration order."""
    check_budget(n, k, budget)
    chunks = [b for _, b in _subspace_chunks(n, k, 1 << 16)]
    if not chunks:
        return np.zeros((0, k), dtype=np.intp)
    return np.concatenate(chunks)


def reduce_rows(point: int, bases: np.ndarray) -> np.ndarray:
    """Canonical offset of the coset through ``point`` for each RREF basis row-set."""
    off = np.full(bases.shape[0], point, dtype=np.intp)
    for j in range(bases.shape[1]):
        row = bases[:, j]
        pivot_bit = row & -row
        off ^= np.where(off & pivot_bit, row, 0)
    return off


def enumerate_flats_through(
    n: int, k: int, point: int, budget: int | None = None
) -> Iterator[Flat]:
    if not 0 <= point < (1 << n):
        raise ValueError(f"point {point} out of range for n={n}")
    check_budget(n, k, budget)
    for _, bases in _subspace_chunks(n, k, 1 << 14):
        offs = reduce_rows(point, bases)
        for row, off in zip(bases.tolist(), offs.tolist()):
            yield Flat(n, k, tuple(row), off)


def restrict(tt: TruthTable, flat: Flat) -> TruthTable:
    if flat.n != tt.n:
        raise ValueError(f"flat lives in F_2^{flat.n} but function has n={tt.n}")
    return TruthTable(flat.k, tt.bits[flat.points()])


def flat_parity(tt: TruthTable, flat: Flat) -> int:
    if flat.n != tt.n:
        raise ValueError(f"flat lives in F_2^{flat.n} but function has n={tt.n}")
    return int(np.bitwise_xor.reduce(tt.bits[flat.points()]))
