"""Exponential-time ground truth based only on simulation."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice
from math import comb

from .conditions import FastChecker
from .instance import Instance, format_vertex_set
from .simulate import ActivationEngine


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    min_size: int
    witness: frozenset[int]
    subsets_examined: int


def _first_hit(engine: ActivationEngine, k: int, start: int, stop: int) -> int | None:
    """Index (within cardinality class k) of the first target set in [start, stop)."""
    n = engine.n
    for idx, combo in enumerate(islice(combinations(range(n), k), start, stop), start):
        mask = 0
        for i in combo:
            mask |= 1 << i
        if engine.is_target_mask(mask):
            return idx
    return None


_worker_engine: ActivationEngine | None = None


def _init_worker(inst: Instance) -> None:
    global _worker_engine
    _worker_engine = ActivationEngine(inst, backend="bitmask")


def _worker(args) -> int | None:
    return _first_hit(_worker_engine, *args)


def min_target_bruteforce(inst: Instance, budget: int = 20, threads: int = 1) -> OracleResult:
    """Smallest target set; ties go to the lexicographically first one.

    ``subsets_examined`` counts subsets up to and including the witness in
    enumeration order, so it does not depend on ``threads``.
    """
    n = inst.n
    if n > budget:
        raise BudgetExceeded(f"instance has {n} vertices, brute-force budget is {budget}")
    engine = ActivationEngine(inst, backend="bitmask")
    examined = 0
    pool = ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(inst,)) if threads > 1 else None
    try:
        for k in range(n + 1):
            total = comb(n, k)
            if pool is None or total < 4096:
                idx = _first_hit(engine, k, 0, total)
            else:
                chunk = -(-total // (4 * threads))
                jobs = [(k, s, min(s + chunk, total)) for s in range(0, total, chunk)]
                idx = next((r for r in pool.map(_worker, jobs) if r is not None), None)
            if idx is not None:
                combo = next(islice(combinations(range(1, n + 1), k), idx, None))
                return OracleResult(k, frozenset(combo), examined + idx + 1)
            examined += total
    finally:
        if pool is not None:
            pool.shutdown()
    raise AssertionError("the full vertex set is always a target set")


@dataclass(frozen=True)
class CrossValidationReport:
    consistent: bool
    subsets_checked: int
    target_sets: int
    mismatch: tuple[frozenset[int], bool, bool] | None = None

    def describe(self) -> str:
        if self.consistent:
            return f"consistent {self.subsets_checked} subsets {self.target_sets} target sets"
        X, sim, fast = self.mismatch
        return f"MISMATCH X={format_vertex_set(X)} sim={sim} conditions={fast}"


def cross_validate(inst: Instance, budget: int = 16) -> CrossValidationReport:
    """Compare simulation with the condition-based decision on every subset."""
    n = inst.n
    if n > budget:
        raise BudgetExceeded(f"instance has {n} vertices, cross-validation budget is {budget}")
    engine = ActivationEngine(inst, backend="bitmask")
    fast = FastChecker(inst)
    targets = 0
    for mask in range(1 << n):
        X = engine.from_mask(mask)
        sim = engine.is_target_mask(mask)
        by_cond = fast(X)
        if sim != by_cond:
            return CrossValidationReport(False, mask + 1, targets, (X, sim, by_cond))
        targets += sim
    return CrossValidationReport(True, 1 << n, targets)
