"""Minimum target sets by dynamic programming over a nice tree decomposition.

The DP runs on the kernel.  A table entry is keyed by a *pattern*
``(S, B)``: ``S`` is the intersection of the partial solution with the bag,
``B`` is the set of flags currently raised.  Flags are tuples:

``('p', i)``
    some vertex of ``N[U_i]`` must still be found among forgotten vertices
    (non-bipartite component ``i``, present while ``U_i`` meets the bag);
``('a', i)`` / ``('b', i)``
    same for the two sides ``A_bar`` / ``B_bar`` of bipartite component ``i``;
``('v1', s)`` / ``('v2', s)``
    sentinel ``s`` (in the bag) needs a forgotten neighbour in ``X`` /
    a forgotten neighbour whose whole neighbourhood is in ``X``;
``('d', u)``
    FULL vertex ``u`` (in the bag) promises ``N(u) ⊆ X``.

A raised ``p``/``a``/``b``/``v1``/``v2`` flag only adds a requirement, so the
cost never decreases when one of them is raised.  ``d`` flags are promises
that forgotten sentinels may depend on; they are matched exactly at join
nodes and tables are not monotone in them.  The value stored is
the least number of forgotten vertices in ``X``; missing keys are infeasible.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterable

from .conditions import Classification, classify
from .decomposition import (
    NiceTreeDecomposition,
    NodeKind,
    TreeDecomposition,
    heuristic_td,
    make_nice,
    restrict_td,
)
from .instance import Instance
from .kernel import kernelize
from .simulate import is_target_set

INF = math.inf
EMPTY: frozenset = frozenset()

Flag = tuple
Pattern = tuple  # (frozenset[int], frozenset[Flag])


def _subsets(items: Iterable) -> list[frozenset]:
    items = sorted(items)
    return [
        frozenset(c)
        for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))
    ]


class PatternSpace:
    """Per-vertex flag bookkeeping derived from a kernel classification."""

    def __init__(self, inst: Instance, cls: Classification):
        g = inst.graph
        self.adj = g.adj
        self.full = cls.full_vertices
        self.sentinels = frozenset(cls.sentinels)
        own: dict[int, list[Flag]] = defaultdict(list)
        hit_set: dict[Flag, frozenset[int]] = {}
        for i, pc in enumerate(cls.p_components):
            for u in pc.U:
                own[u].append(("p", i))
            hit_set[("p", i)] = pc.closed_nbhd
        for i, qc in enumerate(cls.q_components):
            for u in qc.U:
                own[u] += [("a", i), ("b", i)]
            hit_set[("a", i)] = qc.A_bar
            hit_set[("b", i)] = qc.B_bar
        for s in cls.sentinels:
            own[s] += [("v1", s), ("v2", s)]
            hit_set[("v1", s)] = frozenset(g.adj[s])
        for u in self.full:
            own[u].append(("d", u))
        hits: dict[int, set[Flag]] = defaultdict(set)
        for f, members in hit_set.items():
            for u in members:
                hits[u].add(f)
        self.own = {u: tuple(fs) for u, fs in own.items()}
        self.hit_set = hit_set
        self.hits = {u: frozenset(fs) for u, fs in hits.items()}

    def flags(self, bag: Iterable[int]) -> frozenset[Flag]:
        return frozenset(f for u in bag for f in self.own.get(u, ()))

    def patterns(self, bag: frozenset[int]) -> Iterable[Pattern]:
        flag_sets = _subsets(self.flags(bag))
        for S in _subsets(bag):
            for B in flag_sets:
                yield S, B


@dataclass
class DPResult:
    cost: int
    witness: frozenset[int]
    tables: list[dict] | None = None
    max_patterns: int = 0
    node_work: list[int] = field(default_factory=list)


def _leaf():
    return {(EMPTY, EMPTY): (0, None)}, 1


def _introduce(space: PatternSpace, bag, u, child):
    adj = space.adj
    nbrs_in_bag = frozenset(v for v in adj[u] if v in bag)
    full_nbr_flags = [("d", v) for v in nbrs_in_bag if v in space.full]
    u_full = u in space.full
    d_u = ("d", u)
    out = {}
    work = 0
    for key, (cost, _) in child.items():
        Sc, Bc = key
        for in_s in (False, True):
            work += 1
            # a FULL neighbour promising N(v) ⊆ X needs the new vertex in X
            if not in_s and any(f in Bc for f in full_nbr_flags):
                continue
            S = Sc | {u} if in_s else Sc
            out[(S, Bc)] = (cost, key)
            if u_full and nbrs_in_bag <= S:
                out[(S, Bc | {d_u})] = (cost, key)
    return out, work


def _forget(space: PatternSpace, bag, child_bag, u, child):
    adj = space.adj
    flags_t = space.flags(bag)
    gone = [f for f in space.flags(child_bag) - flags_t if f[0] != "d"]
    u_full = u in space.full
    hits_u = space.hits.get(u, EMPTY)
    bag_nbrs = [v for v in adj[u] if v in bag]
    v2_cleared = frozenset(("v2", s) for s in bag_nbrs if s in space.sentinels)
    d_u = ("d", u)
    choices = (True,) if u in space.sentinels else (False, True)
    out = {}
    work = 0
    for S, B in space.patterns(bag):
        best, arg = INF, None
        for in_x in choices:
            Sc = S | {u} if in_x else S
            Bc = set(B - hits_u) if in_x else set(B)
            for f in gone:
                if f[0] == "v2":
                    if not any(("d", v) in B for v in adj[f[1]] if v in bag):
                        Bc.add(f)
                elif Sc.isdisjoint(space.hit_set[f]):
                    Bc.add(f)
            candidates = [frozenset(Bc)]
            if u_full:
                candidates.append(frozenset((Bc - v2_cleared) | {d_u}))
            for Bk in candidates:
                work += 1
                hit = child.get((Sc, Bk))
                if hit is not None and hit[0] + in_x < best:
                    best, arg = hit[0] + in_x, (Sc, Bk)
        if arg is not None:
            out[(S, B)] = (best, arg)
    return out, work


def _split(B):
    d = frozenset(f for f in B if f[0] == "d")
    return d, B - d


def _join(left, right):
    groups = defaultdict(list)
    for key, (cost, _) in right.items():
        S, B = key
        d, rest = _split(B)
        groups[(S, d)].append((rest, cost, key))
    out = {}
    work = 0
    for lkey, (lcost, _) in left.items():
        S, B = lkey
        d, rest = _split(B)
        for rrest, rcost, rkey in groups.get((S, d), ()):
            work += 1
            key = (S, d | rest | rrest)
            cost = lcost + rcost
            cur = out.get(key)
            if cur is None or cost < cur[0]:
                out[key] = (cost, (lkey, rkey))
    # a raised flag only adds a requirement: close downwards over non-d flags
    buckets = defaultdict(list)
    for key in out:
        buckets[len(key[1]) - len(_split(key[1])[0])].append(key)
    for k in range(max(buckets, default=0), 0, -1):
        for key in buckets[k]:
            cost, prov = out[key]
            S, B = key
            for f in B:
                if f[0] == "d":
                    continue
                work += 1
                lower = (S, B - {f})
                cur = out.get(lower)
                if cur is None:
                    out[lower] = (cost, prov)
                    buckets[k - 1].append(lower)
                elif cost < cur[0]:
                    out[lower] = (cost, prov)
    return out, work


def _check_monotone(table) -> None:
    """Lowering a p/a/b/v1/v2 flag never raises the cost.

    ``d`` flags are excluded: a sentinel may rely on ``b(v) = 1`` for its
    second neighbour, so lowering a ``d`` flag can make a pattern infeasible.
    """
    for (S, B), (cost, _) in table.items():
        for f in B:
            if f[0] == "d":
                continue
            lower = table.get((S, B - {f}))
            assert lower is not None and lower[0] <= cost, (
                f"table not monotone at {sorted(S)} {sorted(B)} lowering {f}"
            )


def run_dp(
    inst: Instance,
    cls: Classification,
    nice: NiceTreeDecomposition,
    check: bool = True,
    keep_tables: bool = False,
) -> DPResult:
    """Bottom-up DP on the kernel ``inst``; returns the root optimum and a witness."""
    space = PatternSpace(inst, cls)
    nodes = nice.nodes
    forget_node: dict[int, int] = {}
    for t, nd in enumerate(nodes):
        if nd.kind is NodeKind.FORGET:
            assert nd.vertex not in forget_node, f"vertex {nd.vertex} forgotten twice"
            forget_node[nd.vertex] = t
    tables: list[dict] = [None] * len(nodes)  # type: ignore[list-item]
    node_work = []
    max_patterns = 0
    for t, nd in enumerate(nodes):
        if nd.kind is NodeKind.LEAF:
            tab, work = _leaf()
        elif nd.kind is NodeKind.INTRODUCE:
            tab, work = _introduce(space, nd.bag, nd.vertex, tables[nd.children[0]])
        elif nd.kind is NodeKind.FORGET:
            c = nd.children[0]
            u = nd.vertex
            if check:
                for w in inst.graph.adj[u]:
                    assert w in nodes[c].bag or (
                        w in forget_node and nice.is_below(forget_node[w], c)
                    ), f"neighbour {w} of forgotten vertex {u} not yet introduced"
            tab, work = _forget(space, nd.bag, nodes[c].bag, u, tables[c])
        else:
            tab, work = _join(tables[nd.children[0]], tables[nd.children[1]])
        k = len(nd.bag)
        assert len(tab) <= 8**k, f"{len(tab)} patterns exceed 8^{k} at node {t}"
        assert work <= 8 * 32**k, f"node {t} work {work} exceeds budget"
        if check:
            _check_monotone(tab)
        max_patterns = max(max_patterns, len(tab))
        node_work.append(work)
        tables[t] = tab

    root_key = (EMPTY, EMPTY)
    root = tables[nice.root].get(root_key)
    if root is None:
        raise RuntimeError("root pattern infeasible; the full vertex set should always qualify")
    X: set[int] = set()
    stack = [(nice.root, root_key)]
    while stack:
        t, key = stack.pop()
        X |= key[0]
        nd = nodes[t]
        prov = tables[t][key][1]
        if nd.kind is NodeKind.JOIN:
            stack += [(nd.children[0], prov[0]), (nd.children[1], prov[1])]
        elif nd.kind is not NodeKind.LEAF:
            stack.append((nd.children[0], prov))
    return DPResult(
        cost=root[0],
        witness=frozenset(X),
        tables=tables if keep_tables else None,
        max_patterns=max_patterns,
        node_work=node_work,
    )


@dataclass(frozen=True)
class SolveResult:
    min_size: int
    witness: frozenset[int]
    forced: frozenset[int]
    width: int
    nice_nodes: int
    max_patterns: int


def solve(
    inst: Instance,
    td: TreeDecomposition | None = None,
    verify: bool = True,
    check: bool = True,
) -> SolveResult:
    """Minimum target set through kernelization and the treewidth DP.

    A supplied decomposition must be valid for ``inst``; it is restricted to
    the kernel.  Without one, the min-fill heuristic is run on the kernel.
    """
    kz = kernelize(inst)
    kernel = kz.kernel
    if td is not None:
        td.validate(inst.graph)
        to_kernel = {o: k for k, o in enumerate(kz.vertex_map) if k}
        td_k = restrict_td(td, to_kernel, to_kernel)
    else:
        td_k = heuristic_td(kernel)
    td_k.validate(kernel.graph)
    cls = classify(kernel)
    nice = make_nice(td_k)
    res = run_dp(kernel, cls, nice, check=check)
    witness = kz.forced | kz.to_original(res.witness)
    min_size = len(kz.forced) + res.cost
    if len(witness) != min_size:
        raise RuntimeError(f"witness size {len(witness)} != optimum {min_size}")
    if verify and not is_target_set(inst, witness):
        raise RuntimeError("reconstructed witness failed simulation")
    return SolveResult(
        min_size=min_size,
        witness=witness,
        forced=kz.forced,
        width=nice.width,
        nice_nodes=len(nice.nodes),
        max_patterns=res.max_patterns,
    )
