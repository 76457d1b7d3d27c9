"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

from itertools import combinations

from ntss.conditions import classify
from ntss.decomposition import TreeDecomposition, heuristic_td, make_nice
from ntss.dp import PatternSpace, run_dp
from ntss.instance import Graph, Instance
from ntss.randgen import Lcg, random_instance, random_thresholds, structured_thresholds
from ntss.kernel import kernelize


def path_edges(n):
    return [(i, i + 1) for i in range(1, n)]


def cycle_edges(n):
    return path_edges(n) + [(1, n)]


def path(n, tau=1):
    return Instance.build(n, path_edges(n), [tau] * n if not isinstance(tau, list) else tau)


def cycle(n):
    return Instance.build(n, cycle_edges(n), [1] * n)


def spider():
    # c=1, b1=2, a1=3, b2=4, a2=5
    return Instance.build(5, [(1, 2), (2, 3), (1, 4), (4, 5)], [1, 2, 0, 2, 0])


def star(leaves, centre_tau, leaf_tau=1):
    edges = [(1, v) for v in range(2, leaves + 2)]
    return Instance.build(leaves + 1, edges, [centre_tau] + [leaf_tau] * leaves)


def named_fixtures():
    out = {}
    for n in range(2, 7):
        out[f"P{n}"] = path(n)
    for n in range(3, 7):
        out[f"C{n}"] = cycle(n)
    out["spider"] = spider()
    for leaves in (2, 3, 4):
        out[f"star{leaves}-one"] = star(leaves, 1)
        out[f"star{leaves}-full"] = star(leaves, "deg", 1)
        out[f"star{leaves}-zero"] = star(leaves, 0)
    return out


def path_td(n):
    return TreeDecomposition(
        {i: frozenset((i, i + 1)) for i in range(1, n)},
        tuple((i, i + 1) for i in range(1, n - 1)),
    )


def tree_td(graph: Graph) -> TreeDecomposition:
    """One bag per edge, chained through shared endpoints (width 1)."""
    edges = list(graph.edges())
    if not edges:
        return TreeDecomposition({1: frozenset(graph.vertices)}, ())
    bag_of_edge = {e: i for i, e in enumerate(edges, 1)}
    bags = {i: frozenset(e) for e, i in bag_of_edge.items()}
    tree = []
    for u in graph.vertices:
        ids = [bag_of_edge[(min(u, v), max(u, v))] for v in graph.adj[u]]
        tree += [(ids[0], j) for j in ids[1:]]
    return TreeDecomposition(bags, tuple(tree))


def random_kernels(count, n_lo, n_hi, seed, min_order=2):
    """Distinct-order stream of kernels from random instances."""
    rng = Lcg(seed)
    out = []
    n = n_lo
    while len(out) < count:
        k = kernelize(random_instance(n, rng)).kernel
        if k.n >= min_order:
            out.append(k)
        n = n + 1 if n < n_hi else n_lo
    return out


def with_random_thresholds(graph, rng, model="uniform"):
    if model == "uniform":
        return Instance(graph, random_thresholds(graph, rng))
    return Instance(graph, structured_thresholds(graph, rng, zero=5, full=50))


def subsets(vertices):
    vs = sorted(vertices)
    for k in range(len(vs) + 1):
        for c in combinations(vs, k):
            yield frozenset(c)


def definitional_cost(kernel, space, nice, t, S, B, subtree_vertices):
    """min |X \\ bag| over X ⊆ V(G_t) meeting the pattern semantics literally.

    X agrees with S on the bag; components and sentinels lying wholly below
    the bag meet their conditions inside G_t; raised flags demand a witness
    among forgotten vertices; raised d flags demand N_t(u) ⊆ X.
    """
    bag = nice.nodes[t].bag
    Vt = subtree_vertices
    Vminus = Vt - bag
    adj = kernel.graph.adj

    def nb_t(v):
        return frozenset(w for w in adj[v] if w in Vt)

    best = None
    for extra in subsets(Vminus):
        X = S | extra
        if best is not None and len(extra) >= best:
            continue
        if _meets(kernel, space, bag, Vminus, X, B, nb_t):
            best = len(extra)
    return best


def _meets(kernel, space, bag, Vminus, X, B, nb_t):
    adj = kernel.graph.adj
    for flag, members in space.hit_set.items():
        kind, i = flag
        if kind == "v1":
            continue
        U = _owners(space, flag)
        if U <= Vminus:
            # component entirely forgotten: its set must be hit
            if X.isdisjoint(members):
                return False
        elif flag in B:
            # raised flag: hit among forgotten vertices
            if X.isdisjoint(members & Vminus):
                return False
    for s in space.sentinels:
        if s in Vminus:
            # forgotten sentinel: v1 in X, v2 with N_t(v2) ⊆ X (promised if in bag)
            ok = False
            for v1 in adj[s]:
                if v1 not in X:
                    continue
                for v2 in adj[s]:
                    if nb_t(v2) <= X and (v2 not in bag or ("d", v2) in B):
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                return False
        elif s in bag:
            # sentinel in bag: raised v1 / v2 flags need forgotten witnesses
            if ("v1", s) in B and not any(v in X for v in adj[s] if v in Vminus):
                return False
            if ("v2", s) in B and not any(nb_t(v) <= X for v in adj[s] if v in Vminus):
                return False
    for u in bag:
        # raised d flag: whole neighbourhood in X
        if ("d", u) in B and not nb_t(u) <= X:
            return False
    return True


def _owners(space, flag):
    return frozenset(u for u, fs in space.own.items() if flag in fs)


def table_semantics_mismatches(kernel, td=None, limit=5):
    """Compare every DP table entry against the definitional minimum."""
    cls = classify(kernel)
    nice = make_nice(td or heuristic_td(kernel))
    res = run_dp(kernel, cls, nice, keep_tables=True)
    space = PatternSpace(kernel, cls)
    bad = []
    for t, nd in enumerate(nice.nodes):
        lo = t - nice.size[t] + 1
        Vt = frozenset().union(*(nice.nodes[s].bag for s in range(lo, t + 1)))
        table = res.tables[t]
        for S, B in space.patterns(nd.bag):
            expect = definitional_cost(kernel, space, nice, t, S, B, Vt)
            got = table.get((S, B))
            got = None if got is None else got[0]
            if got != expect:
                bad.append((t, nd.kind.name, sorted(S), sorted(B), got, expect))
                if len(bad) >= limit:
                    return bad
    return bad


def sentinel_rich(n, rng):
    """Random instance built around sentinels.

    Roles by ``below(3)``: sentinel candidate, FULL candidate, other.  Edges
    only join sentinel-FULL, FULL-other or other-other pairs, so FULL
    candidates stay pairwise non-adjacent.  Others get tau 1, or 0 with
    probability 1/8.
    """
    role = [None] + [rng.below(3) for _ in range(n)]
    allowed = {(0, 1): 85, (1, 2): 35, (2, 2): 70}
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            p = allowed.get(tuple(sorted((role[u], role[v]))), 0)
            if rng.below(100) < p:
                edges.append((u, v))
    g = Graph.from_edges(n, edges)
    tau = []
    for u in g.vertices:
        d = g.degree(u)
        if d == 0 or (role[u] == 2 and rng.below(8) == 0):
            tau.append(0)
        elif role[u] == 1 and d >= 2:
            tau.append(d)
        else:
            tau.append(1)
    return Instance.build(n, edges, tau)


def rich_kernels(count, n_lo, n_hi, seed, min_order=2):
    """Kernels drawn alternately from the structured and sentinel-rich models."""
    rng = Lcg(seed)
    out = []
    n, i = n_lo, 0
    while len(out) < count:
        if i % 2:
            inst = sentinel_rich(n, rng)
        else:
            inst = random_instance(n, rng, model="structured")
        i += 1
        k = kernelize(inst).kernel
        if k.n >= min_order:
            out.append(k)
        n = n + 1 if n < n_hi else n_lo
    return out
