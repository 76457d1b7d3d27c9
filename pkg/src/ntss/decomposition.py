"""Tree decompositions: PACE ``.td`` I/O, validation, min-fill heuristic,
restriction to a vertex subset, and conversion to nice form."""

from __future__ import annotations

import enum
import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .instance import Graph, Instance


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    bags: Mapping[int, frozenset[int]]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def validate(self, graph: Graph) -> None:
        """Raise :class:`DecompositionError` unless this decomposes ``graph``."""
        ids = set(self.bags)
        if not ids:
            raise DecompositionError("decomposition has no bags")
        adj: dict[int, list[int]] = {i: [] for i in ids}
        for a, b in self.tree_edges:
            if a not in ids or b not in ids:
                raise DecompositionError(f"tree edge {a} {b} references an unknown bag")
            if a == b:
                raise DecompositionError(f"tree edge {a} {b} is a loop")
            adj[a].append(b)
            adj[b].append(a)
        if len(self.tree_edges) != len(ids) - 1 or len(_reach(adj, min(ids), ids)) != len(ids):
            raise DecompositionError("tree edges do not form a tree")
        where: dict[int, list[int]] = {u: [] for u in graph.vertices}
        for i, bag in self.bags.items():
            for u in bag:
                if u not in where:
                    raise DecompositionError(f"bag {i} contains unknown vertex {u}")
                where[u].append(i)
        for u, occ in where.items():
            if not occ:
                raise DecompositionError(f"vertex {u} is in no bag")
            if len(_reach(adj, occ[0], set(occ))) != len(occ):
                raise DecompositionError(f"bags containing vertex {u} are not connected")
        for u, v in graph.edges():
            if not any(v in self.bags[i] for i in where[u]):
                raise DecompositionError(f"edge not covered: {u} {v}")


def _reach(adj, start, allowed) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b in allowed and b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def parse_td(text: str, inst: Instance | None = None) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td" or header is not None:
                    raise DecompositionError(f"line {lineno}: malformed solution line")
                header = tuple(int(p) for p in parts[2:])
            elif parts[0] == "b":
                if header is None:
                    raise DecompositionError(f"line {lineno}: bag before 's td' line")
                bid = int(parts[1])
                if bid in bags:
                    raise DecompositionError(f"line {lineno}: duplicate bag {bid}")
                bags[bid] = frozenset(int(p) for p in parts[2:])
            else:
                if header is None or len(parts) != 2:
                    raise DecompositionError(f"line {lineno}: malformed line {line!r}")
                edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            if isinstance(exc, DecompositionError):
                raise
            raise DecompositionError(f"line {lineno}: expected integers in {line!r}") from None
    if header is None:
        raise DecompositionError("missing 's td' line")
    n_bags, max_bag, n = header
    if len(bags) != n_bags:
        raise DecompositionError(f"header declares {n_bags} bags, found {len(bags)}")
    if bags and max(len(b) for b in bags.values()) > max_bag:
        raise DecompositionError("a bag exceeds the declared maximum bag size")
    td = TreeDecomposition(bags, tuple(edges))
    if inst is not None:
        if n != inst.n:
            raise DecompositionError(f"decomposition is for {n} vertices, instance has {inst.n}")
        td.validate(inst.graph)
    return td


def format_td(td: TreeDecomposition, n: int) -> str:
    ids = sorted(td.bags)
    lines = [f"s td {len(ids)} {td.width + 1} {n}"]
    lines += [" ".join(["b", str(i), *map(str, sorted(td.bags[i]))]) for i in ids]
    lines += [f"{a} {b}" for a, b in td.tree_edges]
    return "\n".join(lines) + "\n"


def heuristic_td(inst: Instance | Graph) -> TreeDecomposition:
    """Min-fill elimination ordering; ties go to the lowest vertex id."""
    g = inst.graph if isinstance(inst, Instance) else inst
    if g.n == 0:
        return TreeDecomposition({1: frozenset()}, ())
    nbrs = {u: set(g.adj[u]) for u in g.vertices}

    def fill(u: int) -> int:
        ns = list(nbrs[u])
        return sum(
            1 for i in range(len(ns)) for j in range(i + 1, len(ns)) if ns[j] not in nbrs[ns[i]]
        )

    current = {u: fill(u) for u in g.vertices}
    heap = [(f, u) for u, f in current.items()]
    heapq.heapify(heap)
    order: list[int] = []
    bag_of: dict[int, frozenset[int]] = {}
    while heap:
        f, u = heapq.heappop(heap)
        if u not in current or current[u] != f:
            continue
        del current[u]
        ns = nbrs.pop(u)
        bag_of[u] = frozenset(ns | {u})
        order.append(u)
        touched = set(ns)
        for v in ns:
            nbrs[v].discard(u)
        for v in ns:
            for w in ns:
                if v < w and w not in nbrs[v]:
                    nbrs[v].add(w)
                    nbrs[w].add(v)
        for v in ns:
            touched.update(nbrs[v])
        for v in touched:
            if v in current:
                nf = fill(v)
                if nf != current[v]:
                    current[v] = nf
                    heapq.heappush(heap, (nf, v))
    pos = {u: i for i, u in enumerate(order)}
    # bag id = elimination position + 1; parent = earliest-eliminated later neighbour
    bags = {pos[u] + 1: bag_of[u] for u in order}
    edges = []
    roots = []
    for u in order:
        later = [v for v in bag_of[u] if v != u]
        if later:
            parent = min(later, key=pos.__getitem__)
            edges.append((pos[u] + 1, pos[parent] + 1))
        else:
            roots.append(pos[u] + 1)
    for r in roots[1:]:
        edges.append((roots[0], r))
    return TreeDecomposition(bags, tuple(edges))


def restrict_td(
    td: TreeDecomposition, keep: Iterable[int], relabel: Mapping[int, int] | None = None
) -> TreeDecomposition:
    """Intersect every bag with ``keep``; optionally rename vertices."""
    keep = frozenset(keep)
    bags = {}
    for i, bag in td.bags.items():
        inside = bag & keep
        bags[i] = frozenset(relabel[u] for u in inside) if relabel is not None else inside
    return TreeDecomposition(bags, td.tree_edges)


# -- nice decompositions -----------------------------------------------------


class NodeKind(enum.Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: NodeKind
    bag: frozenset[int]
    children: tuple[int, ...]
    vertex: int | None = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes are stored in post-order: children precede parents, the root is
    last, and the subtree of node ``t`` is ``range(t - size[t] + 1, t + 1)``."""

    nodes: tuple[NiceNode, ...]
    size: tuple[int, ...]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def is_below(self, s: int, t: int) -> bool:
        """True iff node ``s`` lies in the subtree rooted at ``t``."""
        return t - self.size[t] < s <= t

    def check(self) -> None:
        """Assert the node-type invariants."""
        assert not self.nodes[self.root].bag, "root bag must be empty"
        for t, nd in enumerate(self.nodes):
            bags = [self.nodes[c].bag for c in nd.children]
            assert all(c < t for c in nd.children)
            if nd.kind is NodeKind.LEAF:
                assert not nd.children and not nd.bag
            elif nd.kind is NodeKind.JOIN:
                assert len(bags) == 2 and bags[0] == nd.bag == bags[1]
            elif nd.kind is NodeKind.INTRODUCE:
                assert len(bags) == 1 and nd.bag - bags[0] == {nd.vertex} and bags[0] <= nd.bag
            else:
                assert len(bags) == 1 and bags[0] - nd.bag == {nd.vertex} and nd.bag <= bags[0]

    def as_tree_decomposition(self) -> TreeDecomposition:
        bags = {t: nd.bag for t, nd in enumerate(self.nodes)}
        edges = tuple((c, t) for t, nd in enumerate(self.nodes) for c in nd.children)
        return TreeDecomposition(bags, edges)


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    ids = sorted(td.bags)
    adj: dict[int, list[int]] = {i: [] for i in ids}
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    root = ids[0]
    children: dict[int, list[int]] = {}
    order = []
    stack = [(root, None)]
    while stack:
        x, parent = stack.pop()
        order.append(x)
        children[x] = sorted(y for y in adj[x] if y != parent)
        stack.extend((y, x) for y in reversed(children[x]))

    nodes: list[NiceNode] = []

    def add(kind, bag, kids=(), vertex=None) -> int:
        nodes.append(NiceNode(kind, bag, tuple(kids), vertex))
        return len(nodes) - 1

    def morph(top: int, target: frozenset[int]) -> int:
        bag = nodes[top].bag
        for v in sorted(bag - target):
            bag = bag - {v}
            top = add(NodeKind.FORGET, bag, (top,), v)
        for v in sorted(target - bag):
            bag = bag | {v}
            top = add(NodeKind.INTRODUCE, bag, (top,), v)
        return top

    top: dict[int, int] = {}
    for x in reversed(order):  # children before parents
        bag = td.bags[x]
        if not children[x]:
            tops = [morph(add(NodeKind.LEAF, frozenset()), bag)]
        else:
            tops = [morph(top.pop(c), bag) for c in children[x]]
        node = tops[0]
        for other in tops[1:]:
            node = add(NodeKind.JOIN, bag, (node, other))
        top[x] = node
    last = morph(top[root], frozenset())
    return _postorder(nodes, last)


def _postorder(nodes: list[NiceNode], root: int) -> NiceTreeDecomposition:
    out: list[int] = []
    stack = [(root, False)]
    while stack:
        t, done = stack.pop()
        if done:
            out.append(t)
            continue
        stack.append((t, True))
        for c in reversed(nodes[t].children):
            stack.append((c, False))
    new = {old: i for i, old in enumerate(out)}
    fresh = []
    size = []
    for old in out:
        nd = nodes[old]
        kids = tuple(new[c] for c in nd.children)
        fresh.append(NiceNode(nd.kind, nd.bag, kids, nd.vertex))
        size.append(1 + sum(size[k] for k in kids))
    return NiceTreeDecomposition(tuple(fresh), tuple(size))
