"""Minimum degree / nonlinearity of a function over all k-flats."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .anf_text import Claim, CorpusEntry
from .boolfun import TruthTable, degree_rows, nonlinearity_rows
from .flats import (
    BudgetExceeded,
    Flat,
    FlatBlock,
    check_budget,
    count_flats,
    iter_blocks,
    partition,
    restrict,
)


class Metric(str, enum.Enum):
    DEGREE = "degree"
    NONLINEARITY = "nonlinearity"

    @classmethod
    def parse(cls, value: "str | Metric") -> "Metric":
        if isinstance(value, Metric):
            return value
        aliases = {"deg": cls.DEGREE, "nl": cls.NONLINEARITY}
        return aliases.get(value) or cls(value)

    def evaluate(self, tt: TruthTable) -> int:
        if self is Metric.DEGREE:
            return int(degree_rows(tt.bits))
        return int(nonlinearity_rows(tt.bits))


@dataclass(frozen=True)
class AnalysisResult:
    value: int
    witness: Flat
    flats_scanned: int
    metric: Metric


@dataclass(frozen=True)
class BadFlatReport:
    threshold: int
    bad_count: int
    total: int
    metric: Metric = Metric.DEGREE


def restricted_values(
    rows: np.ndarray, k: int, metric: Metric, *, fast_path: bool = True
) -> np.ndarray:
    """Metric value for every restricted table in ``rows`` (shape (..., 2**k))."""
    if metric is Metric.NONLINEARITY:
        return nonlinearity_rows(rows)
    if not fast_path or k == 0:
        return degree_rows(rows)
    # odd weight on a k-flat means full degree k; only even rows need a transform
    odd = np.bitwise_xor.reduce(rows, axis=-1).astype(bool)
    out = np.full(rows.shape[:-1], k, dtype=np.int64)
    even = ~odd
    if even.any():
        out[even] = degree_rows(rows[even])
    return out


def is_bad(values: np.ndarray, metric: Metric, threshold: int) -> np.ndarray:
    """Degree counts as bad below ``threshold``; nonlinearity at or below it."""
    if metric is Metric.DEGREE:
        return values < threshold
    return values <= threshold


def _check_k(tt: TruthTable, k: int) -> None:
    if not 1 <= k <= tt.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={tt.n}")


def _scan(
    n: int,
    k: int,
    reduce_block: Callable[[FlatBlock], object],
    *,
    threads: int = 1,
    budget: int | None = None,
) -> list:
    """Apply ``reduce_block`` to every block, in enumeration order."""
    check_budget(n, k, budget)
    if threads <= 1:
        return [reduce_block(b) for b in iter_blocks(n, k, budget=budget)]

    def run(rng: tuple[int, int]) -> list:
        lo, hi = rng
        return [reduce_block(b) for b in iter_blocks(n, k, start=lo, stop=hi, budget=budget)]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(run, partition(n, k, threads, budget)))
    return [r for part in parts for r in part]


def alpha(
    tt: TruthTable,
    k: int,
    metric: Metric | str = Metric.DEGREE,
    *,
    fast_path: bool = True,
    threads: int = 1,
    budget: int | None = None,
) -> AnalysisResult:
    """Minimum of the metric over all k-flats, with the first minimizing flat.

    Ties are broken by enumeration order, so the witness does not depend on
    how the scan is partitioned.
    """
    metric = Metric.parse(metric)
    _check_k(tt, k)
    bits = tt.bits

    def reduce_block(block: FlatBlock):
        vals = restricted_values(bits[block.points], k, metric, fast_path=fast_path)
        row = int(np.argmin(vals))
        return int(vals[row]), block.start + row, block, row

    best = min(_scan(tt.n, k, reduce_block, threads=threads, budget=budget), key=lambda r: r[:2])
    value, _, block, row = best
    return AnalysisResult(value, block.flat(row), count_flats(tt.n, k), metric)


def bad_flat_count(
    tt: TruthTable,
    k: int,
    metric: Metric | str,
    threshold: int,
    *,
    threads: int = 1,
    budget: int | None = None,
) -> BadFlatReport:
    metric = Metric.parse(metric)
    _check_k(tt, k)
    bits = tt.bits

    def reduce_block(block: FlatBlock) -> int:
        vals = restricted_values(bits[block.points], k, metric)
        return int(is_bad(vals, metric, threshold).sum())

    bad = sum(_scan(tt.n, k, reduce_block, threads=threads, budget=budget))
    return BadFlatReport(threshold, bad, count_flats(tt.n, k), metric)


# --- exhaustive maximum over all functions ----------------------------------------

EXHAUSTIVE_MAX_N = 4


def exhaustive_max(
    n: int,
    k: int,
    metric: Metric | str = Metric.DEGREE,
    *,
    override: bool = False,
    batch: int = 4096,
    progress: Callable[[int, int], None] | None = None,
) -> tuple[int, TruthTable]:
    """Exact max over all functions of the minimum restricted metric.

    Only functions with f(0) = 0 are scanned: both metrics are unchanged by
    complementing f.  Returns the value and the first maximizing function.
    """
    metric = Metric.parse(metric)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if n > EXHAUSTIVE_MAX_N and not override:
        raise BudgetExceeded(
            f"exhaustive scan over 2^{1 << n} functions needs the override flag (n={n} > {EXHAUSTIVE_MAX_N})"
        )
    points = np.concatenate([b.points for b in iter_blocks(n, k)])
    size = 1 << n
    shifts = np.arange(size, dtype=np.int64)
    total = 1 << (size - 1)
    best_val, best_code = -1, 0
    for lo in range(0, total, batch):
        codes = np.arange(lo, min(total, lo + batch), dtype=np.int64) << 1
        tables = ((codes[:, None] >> shifts) & 1).astype(np.uint8)
        vals = restricted_values(tables[:, points], k, metric).min(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_code = int(vals[i]), int(codes[i])
        if progress is not None:
            progress(min(total, lo + batch), total)
    return best_val, TruthTable.from_function(n, lambda x: best_code >> x)


def exhaustive_g(n: int, k: int, metric: Metric | str = Metric.DEGREE, *, override: bool = False) -> int:
    return exhaustive_max(n, k, metric, override=override)[0]


# --- corpus claim verification ------------------------------------------------------


@dataclass(frozen=True)
class ClaimCheck:
    id: str
    claim: str
    expected: int
    computed: int
    status: str
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_record(self) -> dict:
        rec = {
            "id": self.id,
            "claim": self.claim,
            "expected": self.expected,
            "computed": self.computed,
            "status": self.status,
        }
        if self.witness is not None:
            rec["witness"] = self.witness
        return rec


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def verify_claim(
    entry: CorpusEntry, *, threads: int = 1, budget: int | None = None
) -> list[ClaimCheck]:
    """Check every claim of a corpus entry; failures are reported, never raised."""
    tt = entry.truth_table()
    out: list[ClaimCheck] = []
    for claim in entry.claims:
        try:
            out.extend(_check_one(entry.id, tt, claim, threads, budget))
        except (ValueError, BudgetExceeded) as exc:
            out.append(ClaimCheck(entry.id, f"{claim.describe()} ({exc})", claim.value, -1, "fail"))
    return out


def _check_one(entry_id: str, tt: TruthTable, claim: Claim, threads: int, budget) -> list[ClaimCheck]:
    if claim.kind in ("alpha", "alpha_nl"):
        metric = Metric.DEGREE if claim.kind == "alpha" else Metric.NONLINEARITY
        res = alpha(tt, claim.k, metric, threads=threads, budget=budget)
        name = f"{claim.kind}(k={claim.k})"
        witness_val = metric.evaluate(restrict(tt, res.witness))
        ge = ClaimCheck(entry_id, f"{name} >= {claim.value}", claim.value, res.value, _status(res.value >= claim.value))
        if claim.op == "ge":
            return [ge]
        le = ClaimCheck(
            entry_id,
            f"{name} <= {claim.value}",
            claim.value,
            witness_val,
            _status(witness_val <= claim.value),
            res.witness.to_text(),
        )
        return [le, ge]

    metric = Metric.DEGREE if claim.kind == "bad_flats" else Metric.NONLINEARITY
    rep = bad_flat_count(tt, claim.k, metric, claim.threshold, threads=threads, budget=budget)
    ok = rep.bad_count >= claim.value if claim.op == "ge" else rep.bad_count == claim.value
    checks = [ClaimCheck(entry_id, claim.describe(), claim.value, rep.bad_count, _status(ok))]
    if claim.total is not None:
        checks.append(
            ClaimCheck(entry_id, f"flat total (k={claim.k})", claim.total, rep.total, _status(rep.total == claim.total))
        )
    return checks
