"""Reduction rule isolating components of full-threshold vertices.

If ``U`` is a component of order >= 2 of the subgraph induced by the vertices
with ``tau(u) == deg(u)``, then every target set contains ``N[U]``, and the
rest of the problem lives on ``G - N[U]`` with thresholds lowered by the
number of removed neighbours.  Applied until no such component remains.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import Instance, components


@dataclass(frozen=True)
class ReductionRound:
    component: frozenset[int]
    closed_nbhd: frozenset[int]


@dataclass(frozen=True)
class Kernelization:
    """Kernel instance plus the bookkeeping to return to original ids.

    ``vertex_map[k]`` is the original id of kernel vertex ``k`` (index 0 is a
    dummy).  ``rounds`` record each removed component in original ids.
    """

    kernel: Instance
    forced: frozenset[int]
    vertex_map: tuple[int, ...]
    rounds: tuple[ReductionRound, ...]

    def to_original(self, kernel_vertices) -> frozenset[int]:
        return frozenset(self.vertex_map[k] for k in kernel_vertices)

    def to_kernel(self, original_vertices) -> frozenset[int]:
        inv = {o: k for k, o in enumerate(self.vertex_map) if k}
        return frozenset(inv[o] for o in original_vertices if o in inv)


def full_components(inst: Instance) -> list[frozenset[int]]:
    full = [u for u in inst.graph.vertices if inst.is_full(u)]
    return [c for c in components(inst.graph, full) if len(c) >= 2]


def reduce_once(inst: Instance, U) -> tuple[Instance, frozenset[int]]:
    """Remove ``N[U]``; surviving vertices are renumbered in ascending order."""
    g = inst.graph
    removed = g.closed_nbhd(U)
    keep = [u for u in g.vertices if u not in removed]
    sub, old = g.induced(keep)
    tau = [0]
    for new in sub.vertices:
        u = old[new]
        lost = sum(1 for v in g.adj[u] if v in removed)
        tau.append(max(0, inst.tau[u] - lost))
    return Instance(sub, tuple(tau)), removed


def kernelize(inst: Instance) -> Kernelization:
    current = inst
    to_orig = tuple(range(inst.n + 1))
    forced: set[int] = set()
    rounds = []
    while True:
        comps = full_components(current)
        if not comps:
            break
        U = comps[0]
        nxt, removed = reduce_once(current, U)
        rounds.append(
            ReductionRound(
                frozenset(to_orig[u] for u in U),
                frozenset(to_orig[u] for u in removed),
            )
        )
        forced.update(to_orig[u] for u in removed)
        kept = [u for u in current.graph.vertices if u not in removed]
        to_orig = (0,) + tuple(to_orig[u] for u in kept)
        current = nxt
    return Kernelization(current, frozenset(forced), to_orig, tuple(rounds))
