"""Deterministic simulation of the non-monotone activation process.

A vertex is active at time t iff at least ``tau(u)`` of its neighbours were
active at time t-1.  The state space is finite, so every run is eventually
periodic; :func:`run` stores every visited state exactly and stops at the
first repeat, or at the first all-active state (a fixed point whenever
``tau <= deg``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .instance import Instance

# Above this order the vectorised engine is faster than per-vertex bit tests.
_BITMASK_MAX_N = 64


class StateBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ProcessOutcome:
    reached_all: bool
    t0: int | None
    cycle_start: int
    cycle_length: int
    n_states: int
    trace: tuple[frozenset[int], ...] | None = None


def step(inst: Instance, X: Iterable[int]) -> frozenset[int]:
    active = frozenset(X)
    adj, tau = inst.graph.adj, inst.tau
    return frozenset(
        u
        for u in inst.graph.vertices
        if sum(1 for v in adj[u] if v in active) >= tau[u]
    )


class ActivationEngine:
    """Precompiled process for one instance; reuse it across many seed sets."""

    def __init__(self, inst: Instance, backend: str | None = None):
        self.inst = inst
        n = inst.n
        self.n = n
        if backend not in (None, "bitmask", "numpy"):
            raise ValueError(f"unknown backend {backend!r}")
        self.bitmask = backend == "bitmask" or (backend is None and n <= _BITMASK_MAX_N)
        if self.bitmask:
            self._nbr = [0] * n
            for u in range(1, n + 1):
                mask = 0
                for v in inst.graph.adj[u]:
                    mask |= 1 << (v - 1)
                self._nbr[u - 1] = mask
            self._tau = list(inst.tau[1:])
            self._full = (1 << n) - 1
        else:
            src, dst = [], []
            for u, v in inst.graph.edges():
                src += (u - 1, v - 1)
                dst += (v - 1, u - 1)
            self._src = np.asarray(src, dtype=np.int64)
            self._dst = np.asarray(dst, dtype=np.int64)
            self._tau_arr = np.asarray(inst.tau[1:], dtype=np.float64)

    # -- bitmask backend --
    def _step_mask(self, x: int) -> int:
        out = 0
        nbr, tau = self._nbr, self._tau
        for i in range(self.n):
            if (nbr[i] & x).bit_count() >= tau[i]:
                out |= 1 << i
        return out

    def to_mask(self, X: Iterable[int]) -> int:
        mask = 0
        for u in X:
            mask |= 1 << (u - 1)
        return mask

    @staticmethod
    def from_mask(mask: int) -> frozenset[int]:
        out = []
        u = 1
        while mask:
            if mask & 1:
                out.append(u)
            mask >>= 1
            u += 1
        return frozenset(out)

    # -- numpy backend --
    def _step_arr(self, x: np.ndarray) -> np.ndarray:
        counts = np.bincount(self._src, weights=x[self._dst], minlength=self.n)
        return counts >= self._tau_arr

    def run(
        self,
        X0: Iterable[int],
        record_trace: bool = False,
        max_states: int | None = None,
    ) -> ProcessOutcome:
        X0 = frozenset(X0)
        bad = [u for u in X0 if not 1 <= u <= self.n]
        if bad:
            raise ValueError(f"seed vertex {bad[0]} is not a vertex of the instance")
        if self.bitmask:
            return self._run_mask(self.to_mask(X0), record_trace, max_states)
        return self._run_arr(X0, record_trace, max_states)

    def _run_mask(self, x: int, record_trace: bool, max_states: int | None) -> ProcessOutcome:
        seen: dict[int, int] = {}
        trace = [] if record_trace else None
        t = 0
        while True:
            if trace is not None:
                trace.append(self.from_mask(x))
            if x == self._full:
                return _outcome(True, t, t, 1, t + 1, trace)
            if x in seen:
                s = seen[x]
                if trace is not None:
                    trace.pop()
                return _outcome(False, None, s, t - s, t, trace)
            if max_states is not None and len(seen) >= max_states:
                raise StateBudgetExceeded(f"more than {max_states} distinct states")
            seen[x] = t
            x = self._step_mask(x)
            t += 1

    def _run_arr(self, X0: frozenset[int], record_trace: bool, max_states: int | None) -> ProcessOutcome:
        x = np.zeros(self.n, dtype=bool)
        if X0:
            x[np.fromiter((u - 1 for u in X0), dtype=np.int64)] = True
        seen: dict[bytes, int] = {}
        trace = [] if record_trace else None
        t = 0
        while True:
            if trace is not None:
                trace.append(frozenset((np.flatnonzero(x) + 1).tolist()))
            if x.all():
                return _outcome(True, t, t, 1, t + 1, trace)
            key = np.packbits(x).tobytes()
            if key in seen:
                s = seen[key]
                if trace is not None:
                    trace.pop()
                return _outcome(False, None, s, t - s, t, trace)
            if max_states is not None and len(seen) >= max_states:
                raise StateBudgetExceeded(f"more than {max_states} distinct states")
            seen[key] = t
            x = self._step_arr(x)
            t += 1

    def is_target_mask(self, x: int) -> bool:
        """Decision on a bitmask seed; needs the bitmask backend."""
        seen = set()
        full = self._full
        while x != full:
            if x in seen:
                return False
            seen.add(x)
            x = self._step_mask(x)
        return True


def _outcome(reached, t0, start, length, n_states, trace) -> ProcessOutcome:
    return ProcessOutcome(
        reached_all=reached,
        t0=t0,
        cycle_start=start,
        cycle_length=length,
        n_states=n_states,
        trace=None if trace is None else tuple(trace),
    )


def run(
    inst: Instance,
    X0: Iterable[int],
    record_trace: bool = False,
    max_states: int | None = None,
) -> ProcessOutcome:
    return ActivationEngine(inst).run(X0, record_trace, max_states)


def is_target_set(inst: Instance, X: Iterable[int], max_states: int | None = None) -> bool:
    return run(inst, X, max_states=max_states).reached_all
