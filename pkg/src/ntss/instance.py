"""Graphs, threshold maps and the ``.ntss`` instance format.

Vertices are dense 1-based integer ids.  Adjacency tuples carry a dummy
entry at index 0 so that ``graph.adj[u]`` works directly for ``u`` in
``1..n``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class InstanceError(ValueError):
    """Raised for malformed instance files or invalid threshold maps."""


class VertexClass(enum.Enum):
    ZERO = "0"
    ONE = "1"
    FULL = "deg"


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n + 1)]
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise InstanceError(f"vertex id out of range in edge {u} {v}")
            if u == v:
                raise InstanceError(f"self-loop on vertex {u}")
            if v in nbrs[u]:
                raise InstanceError(f"duplicate edge {min(u, v)} {max(u, v)}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u in range(1, self.n + 1):
            for v in self.adj[u]:
                if u < v:
                    yield u, v

    def open_nbhd(self, vertices: Iterable[int]) -> frozenset[int]:
        """N(X): neighbors of X that are not in X."""
        xs = set(vertices)
        out: set[int] = set()
        for u in xs:
            out.update(self.adj[u])
        return frozenset(out - xs)

    def closed_nbhd(self, vertices: Iterable[int]) -> frozenset[int]:
        xs = frozenset(vertices)
        return xs | self.open_nbhd(xs)

    def induced(self, keep: Sequence[int]) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph induced by ``keep`` relabelled densely in ascending id order.

        Returns the new graph and the map new id -> old id (index 0 unused).
        """
        order = tuple(sorted(set(keep)))
        new_id = {old: i for i, old in enumerate(order, 1)}
        edges = [
            (new_id[u], new_id[v])
            for u in order
            for v in self.adj[u]
            if u < v and v in new_id
        ]
        return Graph.from_edges(len(order), edges), (0,) + order


@dataclass(frozen=True)
class Instance:
    """A graph with thresholds ``tau[u]`` (``tau[0]`` is a dummy 0)."""

    graph: Graph
    tau: tuple[int, ...]

    def __post_init__(self) -> None:
        g = self.graph
        if len(self.tau) != g.n + 1:
            raise InstanceError("threshold map does not match vertex count")
        for u in g.vertices:
            t, d = self.tau[u], g.degree(u)
            if t < 0:
                raise InstanceError(f"negative threshold on vertex {u}")
            if t > d:
                raise InstanceError(f"threshold {t} exceeds degree {d} on vertex {u}")
            if t not in (0, 1, d):
                raise InstanceError(
                    f"threshold not in {{0,1,deg}} on vertex {u} (tau={t}, deg={d})"
                )

    @classmethod
    def build(
        cls, n: int, edges: Iterable[tuple[int, int]], tau: Sequence[int | str]
    ) -> "Instance":
        """Build from an edge list and ``n`` thresholds (``"deg"`` allowed)."""
        g = Graph.from_edges(n, edges)
        if len(tau) != n:
            raise InstanceError(f"expected {n} thresholds, got {len(tau)}")
        resolved = [0]
        for u, t in enumerate(tau, 1):
            resolved.append(g.degree(u) if t == "deg" else int(t))
        return cls(g, tuple(resolved))

    @property
    def n(self) -> int:
        return self.graph.n

    def is_full(self, u: int) -> bool:
        """Literal ``tau(u) == deg(u)`` test, as used by the reduction rule."""
        return self.tau[u] == self.graph.degree(u)

    def vertex_class(self, u: int) -> VertexClass:
        t = self.tau[u]
        if t == 0:
            return VertexClass.ZERO
        if t == 1:
            return VertexClass.ONE
        return VertexClass.FULL

    def full_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.graph.edges() if self.is_full(u) and self.is_full(v)]


# -- structural queries ------------------------------------------------------


def components(graph: Graph, subset: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of ``graph[subset]``, ordered by smallest member."""
    inside = set(subset)
    seen: set[int] = set()
    out = []
    for s in sorted(inside):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in graph.adj[u]:
                if v in inside and v not in seen:
                    seen.add(v)
                    comp.add(v)
                    queue.append(v)
        out.append(frozenset(comp))
    return out


def bipartition(
    graph: Graph, component: Iterable[int]
) -> tuple[frozenset[int], frozenset[int]] | None:
    """2-colour a connected induced subgraph; ``A`` holds the smallest id.

    Returns ``None`` when the induced subgraph contains an odd cycle.
    """
    comp = set(component)
    if not comp:
        return frozenset(), frozenset()
    start = min(comp)
    colour = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in graph.adj[u]:
            if v not in comp:
                continue
            if v not in colour:
                colour[v] = 1 - colour[u]
                queue.append(v)
            elif colour[v] == colour[u]:
                return None
    if len(colour) != len(comp):
        raise ValueError("component is not connected")
    a = frozenset(v for v, c in colour.items() if c == 0)
    return a, frozenset(comp) - a


# -- text formats ------------------------------------------------------------


def parse_instance(text: str) -> Instance:
    header = None
    taus: dict[int, int | str] = {}
    edges: list[tuple[int, int]] = []
    seen_edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        where = f"line {lineno}"
        if parts[0] == "p":
            if header is not None:
                raise InstanceError(f"{where}: duplicate header")
            if len(parts) != 4 or parts[1] != "ntss":
                raise InstanceError(f"{where}: malformed header {line!r}")
            header = (_int(parts[2], where), _int(parts[3], where))
            if min(header) < 0:
                raise InstanceError(f"{where}: negative count in header")
            continue
        if header is None:
            raise InstanceError(f"{where}: content before 'p ntss' header")
        n = header[0]
        if parts[0] == "t":
            if len(parts) != 3:
                raise InstanceError(f"{where}: malformed threshold line {line!r}")
            u = _vertex(parts[1], n, where)
            if u in taus:
                raise InstanceError(f"{where}: duplicate threshold for vertex {u}")
            if parts[2] == "deg":
                taus[u] = "deg"
            else:
                t = _int(parts[2], where)
                if t < 0:
                    raise InstanceError(f"{where}: negative threshold")
                taus[u] = t
        elif parts[0] == "e":
            if len(parts) != 3:
                raise InstanceError(f"{where}: malformed edge line {line!r}")
            u, v = _vertex(parts[1], n, where), _vertex(parts[2], n, where)
            if u >= v:
                raise InstanceError(f"{where}: edge must satisfy u < v, got {u} {v}")
            if (u, v) in seen_edges:
                raise InstanceError(f"{where}: duplicate edge {u} {v}")
            seen_edges.add((u, v))
            edges.append((u, v))
        else:
            raise InstanceError(f"{where}: unknown line type {parts[0]!r}")
    if header is None:
        raise InstanceError("missing 'p ntss <n> <m>' header")
    n, m = header
    missing = [u for u in range(1, n + 1) if u not in taus]
    if missing:
        raise InstanceError(f"missing threshold line for vertex {missing[0]}")
    if len(edges) != m:
        raise InstanceError(f"header declares {m} edges, found {len(edges)}")
    return Instance.build(n, edges, [taus[u] for u in range(1, n + 1)])


def serialize_instance(inst: Instance, comments: Sequence[str] = ()) -> str:
    g = inst.graph
    lines = [f"# {c}" for c in comments]
    lines.append(f"p ntss {g.n} {g.m}")
    lines.extend(f"t {u} {inst.tau[u]}" for u in g.vertices)
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_vertex_set(text: str) -> frozenset[int]:
    text = text.strip()
    if not text:
        return frozenset()
    try:
        return frozenset(int(tok) for tok in text.split(","))
    except ValueError:
        raise InstanceError(f"malformed vertex set {text!r}") from None


def format_vertex_set(vertices: Iterable[int]) -> str:
    return ",".join(str(v) for v in sorted(vertices))


def _int(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceError(f"{where}: expected an integer, got {tok!r}") from None


def _vertex(tok: str, n: int, where: str) -> int:
    u = _int(tok, where)
    if not 1 <= u <= n:
        raise InstanceError(f"{where}: vertex id {u} out of range 1..{n}")
    return u
