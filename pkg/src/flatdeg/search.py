"""Randomized hill climbing for functions with no "bad" k-flats.

A flat is bad when the restricted degree is below the threshold ``d`` (or
the restricted nonlinearity is at most ``m``).  Each step flips one or two
random points of the truth table and keeps the change unless the number of
bad flats goes up; ties are accepted so plateaus can be crossed.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import Metric, bad_flat_count, is_bad, restricted_values
from .boolfun import TruthTable
from .flats import check_budget, count_flats, iter_blocks, span_rows, subspace_bases

log = logging.getLogger(__name__)

RNG_ALGORITHM = f"numpy PCG64 / SeedSequence(seed, spawn_key=(restart,)) numpy-{np.__version__}"
DEFAULT_INCIDENCE_MEMORY = 512 * 2**20


@dataclass(frozen=True)
class SearchConfig:
    n: int
    k: int
    metric: Metric = Metric.DEGREE
    threshold: int = 1
    steps: int = 10_000
    restarts: int = 10
    seed: int = 0
    flip_probs: tuple[float, float] = (0.5, 0.5)
    incidence_memory: int = DEFAULT_INCIDENCE_MEMORY
    trace: bool = False
    budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "metric", Metric.parse(self.metric))
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        top = self.k if self.metric is Metric.DEGREE else 1 << (self.k - 1)
        if not 0 <= self.threshold <= top:
            raise ValueError(f"threshold {self.threshold} outside [0, {top}] for {self.metric.value}")
        if self.steps < 1 or self.restarts < 1:
            raise ValueError("steps and restarts must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        p1, p2 = self.flip_probs
        if p1 < 0 or p2 < 0 or not np.isclose(p1 + p2, 1.0):
            raise ValueError("flip_probs must be two non-negative probabilities summing to 1")


@dataclass
class SearchOutcome:
    status: str
    function: TruthTable
    bad_flats: int
    restarts_used: int
    steps_used: int
    restart_best: list[int] = field(default_factory=list)
    found_restart: int | None = None
    found_step: int | None = None
    rng: str = RNG_ALGORITHM
    trace: list[list[int]] | None = None


def objective(tt: TruthTable, cfg: SearchConfig) -> int:
    return bad_flat_count(tt, cfg.k, cfg.metric, cfg.threshold, budget=cfg.budget).bad_count


class Evaluator:
    """Bad-flat bookkeeping for one (n, k, metric, threshold).

    With ``mode="incidence"`` every flat's badness is cached and a
    point-to-flat index says which entries a flip touches.  With
    ``mode="stream"`` nothing per-flat is kept: the flats through a point are
    the cosets ``point + V`` over all k-dim subspaces V, and the change in
    the count is recomputed from those directly.
    """

    def __init__(self, cfg: SearchConfig, mode: str | None = None):
        self.cfg = cfg
        n, k = cfg.n, cfg.k
        self.total = check_budget(n, k, cfg.budget)
        self.span = span_rows(subspace_bases(n, k, cfg.budget))
        nsub = self.span.shape[0]
        itemsize = np.dtype(np.intp).itemsize
        need = self.total * (1 << k) * itemsize + (1 << n) * nsub * itemsize
        if mode is None:
            mode = "incidence" if need <= cfg.incidence_memory else "stream"
        if mode not in ("incidence", "stream"):
            raise ValueError(f"unknown evaluator mode {mode!r}")
        self.mode = mode
        if mode == "incidence":
            self.points = np.concatenate([b.points for b in iter_blocks(n, k, budget=cfg.budget)])
            order = np.argsort(self.points.ravel(), kind="stable") // (1 << k)
            self.incidence = order.reshape(1 << n, nsub)

    def _bad(self, bits: np.ndarray, pts: np.ndarray) -> np.ndarray:
        vals = restricted_values(bits[pts], self.cfg.k, self.cfg.metric)
        return is_bad(vals, self.cfg.metric, self.cfg.threshold)

    def init(self, bits: np.ndarray) -> tuple[int, np.ndarray | None]:
        if self.mode == "incidence":
            cache = self._bad(bits, self.points)
            return int(cache.sum()), cache
        total = sum(
            int(self._bad(bits, b.points).sum()) for b in iter_blocks(self.cfg.n, self.cfg.k, budget=self.cfg.budget)
        )
        return total, None

    def propose(self, bits: np.ndarray, cache, flips: np.ndarray):
        """Change in the bad count if ``flips`` were applied, plus the cache patch.

        ``bits`` must already have the flips applied; ``cache`` is the state before.
        """
        if self.mode == "incidence":
            touched = np.unique(self.incidence[flips].ravel())
            new = self._bad(bits, self.points[touched])
            return int(new.sum()) - int(cache[touched].sum()), (touched, new)
        old_bits = bits.copy()
        old_bits[flips] ^= 1
        delta = 0
        for i, p in enumerate(flips):
            pts = self.span ^ p
            if i:
                # cosets through an earlier flipped point were already counted
                seen = np.zeros(pts.shape[0], dtype=bool)
                for q in flips[:i]:
                    seen |= (self.span == (p ^ q)).any(axis=1)
                pts = pts[~seen]
            delta += int(self._bad(bits, pts).sum()) - int(self._bad(old_bits, pts).sum())
        return delta, None


@dataclass
class SearchState:
    bits: np.ndarray
    objective: int
    cache: np.ndarray | None = None

    def function(self, n: int) -> TruthTable:
        return TruthTable(n, self.bits)


def new_state(evaluator: Evaluator, bits: np.ndarray) -> SearchState:
    bits = np.array(bits, dtype=np.uint8, copy=True)
    obj, cache = evaluator.init(bits)
    return SearchState(bits, obj, cache)


def draw_flips(rng: np.random.Generator, cfg: SearchConfig) -> np.ndarray:
    size = 1 << cfg.n
    count = 1 if size < 2 or rng.random() < cfg.flip_probs[0] else 2
    return rng.choice(size, size=count, replace=False)


def apply_flips(evaluator: Evaluator, state: SearchState, flips: np.ndarray) -> bool:
    """Flip the given points unless that raises the bad count; True if kept."""
    state.bits[flips] ^= 1
    delta, patch = evaluator.propose(state.bits, state.cache, flips)
    if delta > 0:
        state.bits[flips] ^= 1
        return False
    state.objective += delta
    if patch is not None:
        touched, new = patch
        state.cache[touched] = new
    return True


def step(evaluator: Evaluator, state: SearchState, rng: np.random.Generator) -> bool:
    return apply_flips(evaluator, state, draw_flips(rng, evaluator.cfg))


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(restart,))))


@dataclass
class _RestartResult:
    found: bool
    bits: np.ndarray
    best: int
    steps: int
    trace: list[int] | None


def _run_restart(evaluator: Evaluator, restart: int) -> _RestartResult:
    cfg = evaluator.cfg
    rng = restart_rng(cfg.seed, restart)
    state = new_state(evaluator, rng.integers(0, 2, size=1 << cfg.n, dtype=np.uint8))
    trace = [state.objective] if cfg.trace else None
    steps = 0
    while state.objective > 0 and steps < cfg.steps:
        step(evaluator, state, rng)
        steps += 1
        if trace is not None:
            trace.append(state.objective)
    return _RestartResult(state.objective == 0, state.bits.copy(), state.objective, steps, trace)


def search(cfg: SearchConfig, *, workers: int = 1, mode: str | None = None) -> SearchOutcome:
    """Hill climb with up to ``cfg.restarts`` restarts of ``cfg.steps`` steps.

    Restarts are independent and seeded from (seed, restart index); with
    ``workers > 1`` they run in waves, and the lowest-index success wins, so
    the outcome never depends on ``workers``.
    """
    evaluator = Evaluator(cfg, mode)
    results: list[_RestartResult] = []
    wave = max(1, workers)
    pool = ThreadPoolExecutor(max_workers=wave) if wave > 1 else None
    try:
        for lo in range(0, cfg.restarts, wave):
            idx = range(lo, min(cfg.restarts, lo + wave))
            if pool is None:
                batch = [_run_restart(evaluator, r) for r in idx]
            else:
                batch = list(pool.map(lambda r: _run_restart(evaluator, r), idx))
            for r, res in zip(idx, batch):
                results.append(res)
                log.info("restart %d: best %d after %d steps", r, res.best, res.steps)
                if res.found:
                    break
            if results[-1].found:
                break
    finally:
        if pool is not None:
            pool.shutdown()

    best_i = min(range(len(results)), key=lambda i: (results[i].best, i))
    best = results[best_i]
    found = best.found
    return SearchOutcome(
        status="found" if found else "exhausted",
        function=TruthTable(cfg.n, best.bits),
        bad_flats=best.best,
        restarts_used=len(results),
        steps_used=sum(r.steps for r in results),
        restart_best=[r.best for r in results],
        found_restart=best_i if found else None,
        found_step=best.steps if found else None,
        trace=[r.trace for r in results] if cfg.trace else None,
    )


def flats_total(cfg: SearchConfig) -> int:
    return count_flats(cfg.n, cfg.k)
