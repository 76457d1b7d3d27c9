"""Intersection conditions characterising target sets of a kernelized instance.

On an instance with no edge between two full-threshold vertices, ``X`` is a
target set iff

* it meets ``N[U]`` for every non-bipartite all-ONE component ``U`` of order
  at least 2 of the {0,1}-threshold subgraph,
* it meets both ``A ∪ A' ∪ C`` and ``B ∪ B' ∪ C`` for every bipartite such
  component with parts ``A``, ``B``, and
* every ONE vertex whose neighbours are all FULL (a *sentinel*) has a
  neighbour in ``X`` and a neighbour whose whole neighbourhood lies in ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .instance import Instance, VertexClass, bipartition, components, format_vertex_set
from .kernel import Kernelization, kernelize


class NotKernelizedError(ValueError):
    pass


@dataclass(frozen=True)
class PComponent:
    U: frozenset[int]
    closed_nbhd: frozenset[int]


@dataclass(frozen=True)
class QComponent:
    U: frozenset[int]
    A: frozenset[int]
    B: frozenset[int]
    A_bar: frozenset[int]
    B_bar: frozenset[int]


@dataclass(frozen=True)
class Classification:
    p_components: tuple[PComponent, ...]
    q_components: tuple[QComponent, ...]
    sentinels: tuple[int, ...]
    full_vertices: frozenset[int]


@dataclass(frozen=True)
class SentinelConstraint:
    u: int
    nbrs: tuple[tuple[int, frozenset[int]], ...]


@dataclass(frozen=True)
class ConditionSet:
    hitting: tuple[frozenset[int], ...]
    pair_hitting: tuple[tuple[frozenset[int], frozenset[int]], ...]
    sentinel_constraints: tuple[SentinelConstraint, ...]

    def describe(self, rename=None) -> list[str]:
        """Stable one-condition-per-line text form."""
        r = (lambda vs: vs) if rename is None else (lambda vs: [rename[v] for v in vs])
        lines = [f"hit {format_vertex_set(r(s))}" for s in self.hitting]
        lines += [
            f"pair {format_vertex_set(r(a))} | {format_vertex_set(r(b))}"
            for a, b in self.pair_hitting
        ]
        for sc in self.sentinel_constraints:
            parts = " ".join(
                f"{r([v])[0]}[{format_vertex_set(r(nv))}]" for v, nv in sc.nbrs
            )
            lines.append(f"sentinel {r([sc.u])[0]} : {parts}")
        return lines


def classify(inst: Instance) -> Classification:
    g = inst.graph
    bad = inst.full_edges()
    if bad:
        u, v = bad[0]
        raise NotKernelizedError(f"edge {u} {v} joins two full-threshold vertices")
    cls = {u: inst.vertex_class(u) for u in g.vertices}
    low = [u for u in g.vertices if cls[u] is not VertexClass.FULL]
    p_comps, q_comps = [], []
    for U in components(g, low):
        if len(U) < 2 or any(cls[u] is VertexClass.ZERO for u in U):
            continue
        parts = bipartition(g, U)
        if parts is None:
            p_comps.append(PComponent(U, g.closed_nbhd(U)))
            continue
        A, B = parts
        nA, nB = g.open_nbhd(A), g.open_nbhd(B)
        A1 = nB - g.closed_nbhd(A)
        B1 = nA - g.closed_nbhd(B)
        C = nA & nB
        q_comps.append(QComponent(U, A, B, A | A1 | C, B | B1 | C))
    full = frozenset(u for u in g.vertices if cls[u] is VertexClass.FULL)
    # A ONE vertex with only FULL neighbours forms an order-1 component above.
    sentinels = tuple(
        u
        for u in g.vertices
        if cls[u] is VertexClass.ONE and all(v in full for v in g.adj[u])
    )
    for u in sentinels:
        assert g.degree(u) >= 2, f"sentinel {u} of degree < 2 in a kernel"
    return Classification(tuple(p_comps), tuple(q_comps), sentinels, full)


def extract_conditions(cls: Classification, graph) -> ConditionSet:
    sentinel = tuple(
        SentinelConstraint(u, tuple((v, frozenset(graph.adj[v])) for v in graph.adj[u]))
        for u in cls.sentinels
    )
    return ConditionSet(
        tuple(p.closed_nbhd for p in cls.p_components),
        tuple((q.A_bar, q.B_bar) for q in cls.q_components),
        sentinel,
    )


def satisfies(cond: ConditionSet, X: Iterable[int]) -> bool:
    X = frozenset(X)
    if any(X.isdisjoint(s) for s in cond.hitting):
        return False
    if any(X.isdisjoint(a) or X.isdisjoint(b) for a, b in cond.pair_hitting):
        return False
    for sc in cond.sentinel_constraints:
        if not any(v in X for v, _ in sc.nbrs):
            return False
        if not any(nv <= X for _, nv in sc.nbrs):
            return False
    return True


class FastChecker:
    """Kernelizes once, then decides target sets through the conditions."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.kernelization: Kernelization = kernelize(inst)
        k = self.kernelization.kernel
        self.classification = classify(k)
        self.conditions = extract_conditions(self.classification, k.graph)
        self._inv = {o: i for i, o in enumerate(self.kernelization.vertex_map) if i}

    def __call__(self, X: Iterable[int]) -> bool:
        X = frozenset(X)
        if not self.kernelization.forced <= X:
            return False
        return satisfies(self.conditions, (self._inv[o] for o in X if o in self._inv))


def decide_target_set_fast(inst: Instance, X: Iterable[int]) -> bool:
    return FastChecker(inst)(X)
