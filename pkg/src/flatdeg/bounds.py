"""Closed-form bounds on g(n, k) and g'(n, k), the known-values database,
and the tables they combine into.

g(n, k) is the max over f of the minimum restricted degree over k-flats;
g'(n, k) is the same for nonlinearity.  Every inequality here is decided
with exact integer arithmetic.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from importlib import resources
from math import comb
from pathlib import Path
from typing import Iterable

from .analysis import Metric

MAX_N = 24


# --- individual bounds ---------------------------------------------------------


def thm23_holds(n: int, k: int, d: int) -> bool:
    """Counting condition (k+1)(n-k) + 2 <= sum_{i<=k-d-1} C(k, i), which forces g(n, k) > d."""
    if not n > k > d >= 0:
        raise ValueError(f"need n > k > d >= 0, got n={n}, k={k}, d={d}")
    rhs = sum(comb(k, i) for i in range(k - d))
    return (k + 1) * (n - k) + 2 <= rhs


def thm23_lower(n: int, k: int) -> int:
    if not n > k >= 1:
        raise ValueError(f"need n > k >= 1, got n={n}, k={k}")
    # the right-hand side shrinks as d grows, so the passing d form a prefix
    best = -1
    for d in range(k):
        if not thm23_holds(n, k, d):
            break
        best = d
    return best + 1


def thm23_nl_holds(n: int, k: int, m: int) -> bool:
    """sum_{i<=m} C(2^k, i) <= 2^(2^k - (k+1)(n-k+1) - 2), valid for m < 2^(k-2)."""
    if not (n > k >= 2 and 0 <= m < 1 << (k - 2)):
        raise ValueError(f"need n > k >= 2 and 0 <= m < 2^(k-2), got n={n}, k={k}, m={m}")
    exponent = (1 << k) - (k + 1) * (n - k + 1) - 2
    if exponent < 0:
        return False
    size = 1 << k
    return sum(comb(size, i) for i in range(m + 1)) <= 1 << exponent


def thm23_nl_lower(n: int, k: int) -> int:
    if not n > k >= 2:
        raise ValueError(f"need n > k >= 2, got n={n}, k={k}")
    exponent = (1 << k) - (k + 1) * (n - k + 1) - 2
    if exponent < 0:
        return 0
    # same test as thm23_nl_holds, with the binomial sum kept running
    limit, size = 1 << exponent, 1 << k
    total, best = 0, -1
    for m in range(1 << (k - 2)):
        total += comb(size, m)
        if total > limit:
            break
        best = m
    return best + 1


def cor231_lower(n: int, k: int) -> int:
    if k < 5:
        raise ValueError(f"corollary needs k >= 5, got k={k}")
    if k + 2 <= n and 2 * n <= 3 * k - 1:
        return k - 2
    if 2 * n >= 3 * k and 6 * n <= (k + 1) * (k + 4):
        return k - 3
    return 0


def lemma24_valid(a: int, b: int, c: int) -> bool:
    return a >= 0 and b >= 0 and c >= 0 and max(a + 1, b) <= c <= a + b


def lemma24_ceil(a: int, b: int, c: int) -> int:
    """ceil(2^a (2^b - 1) / (2^c - 1)), which collapses to 2^(a+b-c) on the valid range."""
    if not lemma24_valid(a, b, c):
        raise ValueError(f"need a, b, c >= 0 and max(a+1, b) <= c <= a+b, got ({a}, {b}, {c})")
    return 1 << (a + b - c)


def thm25_upper(n: int, k: int) -> int:
    """Smallest d < k with n >= 2^(k-1) + k - floor(2^(d-1)); k if there is none."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    for d in range(k):
        shrink = (1 << (d - 1)) if d >= 1 else 0
        if n >= (1 << (k - 1)) + k - shrink:
            return d
    return k


def thm22_exact(n: int) -> int:
    """g(n, n-1)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    return n - 2


def conjecture_heuristic_log2(k: int) -> float:
    """log2 of the expected number of functions in k+2 variables whose restriction
    to every k-flat has degree >= k-1, treating flats as independent."""
    if not 2 <= k <= 40:
        raise ValueError(f"need 2 <= k <= 40, got k={k}")
    flats = 4 * ((1 << (k + 2)) - 1) * ((1 << (k + 1)) - 1) // 3
    log_p = math.log1p(-(2.0 ** -(k + 1))) / math.log(2)
    return float(1 << (k + 2)) + flats * log_p


# --- known values ------------------------------------------------------------------


@dataclass(frozen=True)
class KnownValue:
    metric: Metric
    n: int
    k: int
    kind: str
    value: int
    source: str


def parse_known_values(text: str) -> list[KnownValue]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(maxsplit=5)
        if len(parts) != 6 or parts[3] not in ("exact", "lower"):
            raise ValueError(f"bad known-value record on line {lineno}: {line!r}")
        metric, n, k, kind, value, source = parts
        out.append(KnownValue(Metric.parse(metric), int(n), int(k), kind, int(value), source))
    return out


def load_known_values(path: Path | str | None = None) -> list[KnownValue]:
    if path is None:
        text = (resources.files("flatdeg") / "data" / "known_values.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_known_values(text)


# --- combination -----------------------------------------------------------------


@dataclass(frozen=True)
class Contribution:
    name: str
    side: str
    value: int


@dataclass(frozen=True)
class BoundsResult:
    n: int
    k: int
    metric: Metric
    lo: int
    hi: int
    provenance: tuple[Contribution, ...]

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def hi_inherited(self) -> bool:
        """True when the upper bound comes only from a smaller n."""
        direct = [c.value for c in self.provenance if c.side == "hi" and c.name != "monotone-n"]
        return min(direct) > self.hi

    def cell(self) -> str:
        if self.exact:
            return str(self.lo)
        if self.hi == self.lo + 1 and not self.hi_inherited:
            return f"{self.lo} or {self.hi}"
        return f"≥ {self.lo}"


class BoundsOracle:
    """Resolves g/g' intervals from the theorems plus a known-values list.

    Results are memoized per (n, k, metric); lookups are safe from several threads.
    """

    def __init__(self, known: Iterable[KnownValue] | None = None):
        self.known = list(load_known_values() if known is None else known)
        self._cache: dict[tuple[int, int, Metric], BoundsResult] = {}
        self._lock = threading.Lock()

    def resolve(self, n: int, k: int, metric: Metric | str = Metric.DEGREE) -> BoundsResult:
        metric = Metric.parse(metric)
        if not 1 <= k <= n <= MAX_N:
            raise ValueError(f"need 1 <= k <= n <= {MAX_N}, got n={n}, k={k}")
        key = (n, k, metric)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        # fill smaller n first so the monotone chain never recurses deeply
        for m in range(k, n):
            if (m, k, metric) not in self._cache:
                self.resolve(m, k, metric)
        res = self._degree(n, k) if metric is Metric.DEGREE else self._nonlinearity(n, k)
        with self._lock:
            self._cache[key] = res
        return res

    def _known(self, n: int, k: int, metric: Metric) -> list[tuple[str, int]]:
        out = []
        for kv in self.known:
            if (kv.metric, kv.n, kv.k) == (metric, n, k):
                name = f"known-value:{kv.source}"
                out.append((name, "lo", kv.value))
                if kv.kind == "exact":
                    out.append((name, "hi", kv.value))
        return out

    def _degree(self, n: int, k: int) -> BoundsResult:
        c: list[tuple[str, str, int]] = [("trivial", "lo", 0), ("trivial", "hi", k)]
        if k == n:
            c.append(("trivial", "lo", n))
        if k == n - 1:
            c += [("thm2.2", "lo", thm22_exact(n)), ("thm2.2", "hi", thm22_exact(n))]
        if n > k:
            c.append(("thm2.3", "lo", thm23_lower(n, k)))
            if k >= 5:
                c.append(("cor2.3.1", "lo", cor231_lower(n, k)))
            c.append(("monotone-n", "hi", self.resolve(n - 1, k, Metric.DEGREE).hi))
        c.append(("thm2.5", "hi", thm25_upper(n, k)))
        c += [(name, side, v) for name, side, v in self._known(n, k, Metric.DEGREE)]
        return self._combine(n, k, Metric.DEGREE, c)

    def _nonlinearity(self, n: int, k: int) -> BoundsResult:
        c: list[tuple[str, str, int]] = [("trivial", "lo", 0), ("trivial", "hi", 1 << (k - 1))]
        if n > k:
            if k >= 2:
                c.append(("thm2.3", "lo", thm23_nl_lower(n, k)))
            c.append(("monotone-n", "hi", self.resolve(n - 1, k, Metric.NONLINEARITY).hi))
        # g' = 0 exactly when g <= 1
        deg = self.resolve(n, k, Metric.DEGREE)
        if deg.lo >= 2:
            c.append(("degree-link", "lo", 1))
        if deg.hi <= 1:
            c.append(("degree-link", "hi", 0))
        c += [(name, side, v) for name, side, v in self._known(n, k, Metric.NONLINEARITY)]
        return self._combine(n, k, Metric.NONLINEARITY, c)

    @staticmethod
    def _combine(n: int, k: int, metric: Metric, contribs) -> BoundsResult:
        lo = max(v for _, side, v in contribs if side == "lo")
        hi = min(v for _, side, v in contribs if side == "hi")
        if lo > hi:
            raise ValueError(f"inconsistent bounds for {metric.value} ({n}, {k}): {lo} > {hi}")
        prov = tuple(Contribution(name, side, v) for name, side, v in contribs)
        return BoundsResult(n, k, metric, lo, hi, prov)


_default_oracle: BoundsOracle | None = None


def default_oracle() -> BoundsOracle:
    global _default_oracle
    if _default_oracle is None:
        _default_oracle = BoundsOracle()
    return _default_oracle


def resolve_bounds(n: int, k: int, metric: Metric | str = Metric.DEGREE) -> BoundsResult:
    return default_oracle().resolve(n, k, metric)


# --- tables ------------------------------------------------------------------------


@dataclass(frozen=True)
class TableDocument:
    metric: Metric
    max_n: int
    max_k: int
    cells: dict[tuple[int, int], str]

    def rows(self) -> list[list[str]]:
        header = ["k\\n", *(str(n) for n in range(1, self.max_n + 1))]
        body = [
            [str(k), *(self.cells.get((n, k), "") for n in range(1, self.max_n + 1))]
            for k in range(1, self.max_k + 1)
        ]
        return [header, *body]

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(self.rows())
        return buf.getvalue()

    def to_text(self) -> str:
        rows = self.rows()
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        return "\n".join(lines) + "\n"


def render_tables(
    max_n: int = 12, max_k: int = 6, metric: Metric | str = Metric.DEGREE, oracle: BoundsOracle | None = None
) -> TableDocument:
    metric = Metric.parse(metric)
    oracle = oracle or default_oracle()
    cells = {
        (n, k): oracle.resolve(n, k, metric).cell()
        for k in range(1, max_k + 1)
        for n in range(k, max_n + 1)
    }
    return TableDocument(metric, max_n, max_k, cells)
