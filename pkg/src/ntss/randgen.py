"""Reproducible pseudo-random instances.

The generator is a 64-bit linear congruential generator with fixed
semantics, so that a ``(seed, n)`` pair names the same instance in every
implementation:

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64
    output = state >> 32                       (a 32-bit word)
    below(k) = (output * k) >> 32              (an integer in [0, k))

The initial state is the seed itself.  Every draw advances the state once.
"""

from __future__ import annotations

from .decomposition import TreeDecomposition
from .instance import Graph, Instance

_MUL = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next32(self) -> int:
        self.state = (_MUL * self.state + _INC) & _MASK
        return self.state >> 32

    def below(self, k: int) -> int:
        return (self.next32() * k) >> 32


def random_thresholds(graph: Graph, rng: Lcg) -> tuple[int, ...]:
    """Per vertex in id order: draw r = below(3); r=0 -> 0, r=1 -> 1, r=2 -> deg.

    ``1`` on an isolated vertex becomes ``0``.
    """
    tau = [0]
    for u in graph.vertices:
        d = graph.degree(u)
        r = rng.below(3)
        tau.append(0 if r == 0 or d == 0 else (1 if r == 1 else d))
    return tuple(tau)


def structured_thresholds(
    graph: Graph, rng: Lcg, zero: int = 8, full: int = 35
) -> tuple[int, ...]:
    """Thresholds that mostly survive kernelization.

    Per vertex in id order draw r = below(100): r < zero -> 0; else
    r < zero + full -> deg, provided deg >= 2 and no smaller neighbour
    already got deg; otherwise 1 (0 on an isolated vertex).
    """
    tau = [0]
    for u in graph.vertices:
        d = graph.degree(u)
        r = rng.below(100)
        if r < zero or d == 0:
            tau.append(0)
        elif r < zero + full and d >= 2 and all(
            v > u or tau[v] != graph.degree(v) or tau[v] < 2 for v in graph.adj[u]
        ):
            tau.append(d)
        else:
            tau.append(1)
    return tuple(tau)


def random_graph(n: int, rng: Lcg, density: int = 35) -> Graph:
    """For each pair u < v in lexicographic order keep the edge iff
    ``below(100) < density``."""
    edges = [
        (u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.below(100) < density
    ]
    return Graph.from_edges(n, edges)


def random_instance(n: int, rng: Lcg, density: int = 35, model: str = "uniform") -> Instance:
    """:func:`random_graph`, then thresholds from :func:`random_thresholds`
    (``model="uniform"``) or :func:`structured_thresholds` (``"structured"``)."""
    g = random_graph(n, rng, density)
    if model == "uniform":
        return Instance(g, random_thresholds(g, rng))
    if model == "structured":
        return Instance(g, structured_thresholds(g, rng))
    raise ValueError(f"unknown threshold model {model!r}")


def random_tree(n: int, rng: Lcg) -> Graph:
    """Vertex v >= 2 attaches to ``1 + below(v - 1)``."""
    return Graph.from_edges(n, [(1 + rng.below(v - 1), v) for v in range(2, n + 1)])


def random_partial_ktree(
    n: int, k: int, rng: Lcg, keep: int = 70
) -> tuple[Graph, TreeDecomposition]:
    """A random k-tree on ``n`` vertices with each edge kept with
    probability ``keep``/100, together with a width-``k`` decomposition.

    The first ``k + 1`` vertices form a clique; vertex v > k + 1 picks bag
    ``below(#bags)`` and a vertex of it to drop (``below(k + 1)`` in sorted
    order), and becomes adjacent to the remaining k vertices.
    """
    base = min(n, k + 1)
    edges = {(u, v) for u in range(1, base + 1) for v in range(u + 1, base + 1)}
    bags = {1: frozenset(range(1, base + 1))}
    tree_edges = []
    for v in range(base + 1, n + 1):
        parent = 1 + rng.below(len(bags))
        members = sorted(bags[parent])
        drop = members[rng.below(len(members))]
        clique = [u for u in members if u != drop]
        edges.update((u, v) for u in clique)
        bags[len(bags) + 1] = frozenset(clique) | {v}
        tree_edges.append((parent, len(bags)))
    kept = [e for e in sorted(edges) if rng.below(100) < keep]
    return Graph.from_edges(n, kept), TreeDecomposition(bags, tuple(tree_edges))
