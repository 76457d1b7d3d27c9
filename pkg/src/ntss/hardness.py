"""Hard instances from restricted CNF formulas.

Every variable occurs positively in exactly two clauses and negatively in
exactly one, clauses have two or three literals.  The construction builds a
5-vertex gadget per variable, a triangle per clause, one connection edge per
literal occurrence, and then subdivides every edge ``2 * (d // 2)`` times.
Literal vertices get ``tau = deg`` and all other vertices ``tau = 1``; the
formula is satisfiable iff a target set of order ``n_vars`` exists.

Planarity of the variable/clause incidence graph is *not* checked; it only
matters for the hardness argument, not for this correspondence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .instance import Graph, Instance
from .simulate import is_target_set


class CnfError(ValueError):
    pass


@dataclass(frozen=True)
class RestrictedCnf:
    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return all(
            any(assignment[abs(l)] == (l > 0) for l in clause) for clause in self.clauses
        )

    def satisfiable(self) -> bool:
        """Brute force over all 2^n assignments."""
        return any(
            self.evaluate(dict(zip(range(1, self.n_vars + 1), bits)))
            for bits in product((False, True), repeat=self.n_vars)
        )


def parse_dimacs(text: str) -> RestrictedCnf:
    header = None
    lits: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: malformed problem line")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfError(f"line {lineno}: malformed problem line") from None
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before problem line")
        try:
            lits.extend(int(tok) for tok in line.split())
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer literal") from None
    if header is None:
        raise CnfError("missing 'p cnf' line")
    clauses = []
    cur: list[int] = []
    for l in lits:
        if l == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            if abs(l) > header[0]:
                raise CnfError(f"literal {l} exceeds declared variable count {header[0]}")
            cur.append(l)
    if cur:
        raise CnfError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise CnfError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return RestrictedCnf(header[0], tuple(clauses))


def format_dimacs(cnf: RestrictedCnf) -> str:
    lines = [f"p cnf {cnf.n_vars} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def validate_restricted(cnf: RestrictedCnf) -> list[str]:
    out = []
    if cnf.n_vars < 1:
        out.append("formula has no variables")
    for j, clause in enumerate(cnf.clauses, 1):
        if len(clause) not in (2, 3):
            out.append(f"clause {j} has {len(clause)} literals (need 2 or 3)")
        if len(set(clause)) != len(clause):
            out.append(f"clause {j} repeats a literal")
        if any(-l in clause for l in clause):
            out.append(f"clause {j} contains a variable and its negation")
    for i in range(1, cnf.n_vars + 1):
        pos = sum(1 for c in cnf.clauses if i in c)
        neg = sum(1 for c in cnf.clauses if -i in c)
        if pos != 2:
            out.append(f"x{i} occurs positively in {pos} clauses (need 2)")
        if neg != 1:
            out.append(f"x{i} occurs negatively in {neg} clauses (need 1)")
    return out


@dataclass(frozen=True)
class GeneratedInstance:
    instance: Instance
    k: int
    d: int
    labels: Mapping[str, int]
    roles: Mapping[str, str]

    def literal(self, lit: int) -> int:
        return self.labels[f"x{lit}" if lit > 0 else f"~x{-lit}"]


def generate(cnf: RestrictedCnf, d: int) -> GeneratedInstance:
    problems = validate_restricted(cnf)
    if problems:
        raise CnfError("formula is not in restricted form: " + "; ".join(problems))
    if d < 1:
        raise CnfError("distance must be a positive integer")
    n, m = cnf.n_vars, len(cnf.clauses)
    labels: dict[str, int] = {}
    roles: dict[str, str] = {}

    def vertex(name: str, role: str) -> int:
        labels[name] = len(labels) + 1
        roles[name] = role
        return labels[name]

    edges: list[tuple[str, str]] = []
    for i in range(1, n + 1):
        x, nx, a, b, c = f"x{i}", f"~x{i}", f"a{i}", f"b{i}", f"c{i}"
        vertex(x, "literal")
        vertex(nx, "literal")
        for g in (a, b, c):
            vertex(g, "gadget")
        edges += [(x, a), (a, b), (b, c), (a, c), (nx, b), (nx, c)]
    for j, clause in enumerate(cnf.clauses, 1):
        tri = [f"C{j}.{k}" for k in (1, 2, 3)]
        for name in tri:
            vertex(name, "clause")
        edges += [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])]
        for k, lit in enumerate(clause):
            edges.append((f"x{lit}" if lit > 0 else f"~x{-lit}", tri[k]))
    assert len(labels) == 5 * n + 3 * m and len(edges) == 9 * n + 3 * m

    subdiv = 2 * (d // 2)
    final_edges = []
    for u, v in edges:
        prev = u
        for s in range(1, subdiv + 1):
            name = f"s:{u}-{v}:{s}"
            vertex(name, "subdivision")
            final_edges.append((labels[prev], labels[name]))
            prev = name
        final_edges.append((labels[prev], labels[v]))
    g = Graph.from_edges(len(labels), final_edges)
    tau = [0] + [
        g.degree(labels[name]) if roles[name] == "literal" else 1 for name in labels
    ]
    return GeneratedInstance(Instance(g, tuple(tau)), n, d, labels, roles)


def format_labels(gen: GeneratedInstance) -> str:
    return "".join(f"{gen.roles[name]} {name} {vid}\n" for name, vid in gen.labels.items())


def assignment_to_target(gen: GeneratedInstance, assignment: Mapping[int, bool]) -> frozenset[int]:
    return frozenset(gen.literal(i if assignment[i] else -i) for i in range(1, gen.k + 1))


def target_to_assignment(
    gen: GeneratedInstance, X, cnf: RestrictedCnf | None = None
) -> dict[int, bool] | None:
    """Read a truth assignment off a target set of order at most ``k``.

    Variables whose literal vertices both miss ``X`` default to true.
    """
    X = frozenset(X)
    if len(X) > gen.k or not is_target_set(gen.instance, X):
        return None
    assignment = {}
    for i in range(1, gen.k + 1):
        pos, neg = gen.literal(i) in X, gen.literal(-i) in X
        assert not (pos and neg), f"target set of order <= k holds both literals of x{i}"
        assignment[i] = not neg
    if cnf is not None and not cnf.evaluate(assignment):
        raise AssertionError("assignment read from a target set does not satisfy the formula")
    return assignment


def check_structure(gen: GeneratedInstance, cnf: RestrictedCnf) -> list[str]:
    """Audit order, degrees and degree-3 distances; returns violations."""
    g = gen.instance.graph
    n, m, d = cnf.n_vars, len(cnf.clauses), gen.d
    out = []
    expected = 5 * n + 3 * m + 2 * (d // 2) * (9 * n + 3 * m)
    if g.n != expected:
        out.append(f"order {g.n} != {expected}")
    if max((g.degree(u) for u in g.vertices), default=0) > 3:
        out.append("maximum degree exceeds 3")
    deg3 = [u for u in g.vertices if g.degree(u) == 3]
    for s in deg3:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if dist[u] + 1 >= d:
                continue
            for v in g.adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        close = [v for v in deg3 if v != s and v in dist]
        if close:
            out.append(f"degree-3 vertices {s} and {close[0]} closer than {d}")
            break
    return out
