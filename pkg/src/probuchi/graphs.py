"""Small graph utilities: SCCs in topological order, reachability, BSCCs.

Tarjan's algorithm is written iteratively (explicit recursion stack) so deep
chains cannot hit Python's recursion limit.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence, TypeVar

N = TypeVar("N", bound=Hashable)

__all__ = ["tarjan_sccs", "sccs_topological", "reachable", "bottom_sccs"]


def tarjan_sccs(
    nodes: Sequence[N], adjacency: Mapping[N, Sequence[N]]
) -> list[list[N]]:
    """Strongly connected components, emitted in reverse topological order."""
    indices: dict[N, int] = {}
    lowlinks: dict[N, int] = {}
    on_stack: set[N] = set()
    stack: list[N] = []
    counter = 0
    sccs: list[list[N]] = []

    for root in nodes:
        if root in indices:
            continue
        work: list[tuple[N, int]] = [(root, 0)]
        while work:
            v, succ_i = work.pop()
            if succ_i == 0:
                indices[v] = lowlinks[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            succs = adjacency.get(v, ())
            for i in range(succ_i, len(succs)):
                w = succs[i]
                if w not in indices:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    lowlinks[v] = min(lowlinks[v], indices[w])
            if recurse:
                continue
            if lowlinks[v] == indices[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                lowlinks[parent] = min(lowlinks[parent], lowlinks[v])
    return sccs


def sccs_topological(
    nodes: Sequence[N],
    adjacency: Mapping[N, Sequence[N]],
    order: Mapping[N, int] | None = None,
) -> list[list[N]]:
    """SCCs sorted topologically, ties broken by smallest member index.

    Kahn's algorithm on the condensation with an index-ordered ready set,
    which makes the numbering deterministic for a fixed node order.
    """
    if order is None:
        order = {n: i for i, n in enumerate(nodes)}
    comps = tarjan_sccs(nodes, adjacency)
    comp_of = {n: i for i, comp in enumerate(comps) for n in comp}
    succs: list[set[int]] = [set() for _ in comps]
    indeg = [0] * len(comps)
    for n in nodes:
        for m in adjacency.get(n, ()):
            ci, cj = comp_of[n], comp_of[m]
            if ci != cj and cj not in succs[ci]:
                succs[ci].add(cj)
                indeg[cj] += 1
    key = [min(order[n] for n in comp) for comp in comps]
    ready = sorted((i for i in range(len(comps)) if indeg[i] == 0), key=lambda i: key[i])
    out: list[list[N]] = []
    while ready:
        i = ready.pop(0)
        out.append(sorted(comps[i], key=lambda n: order[n]))
        changed = False
        for j in succs[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
                changed = True
        if changed:
            ready.sort(key=lambda i: key[i])
    return out


def reachable(start: Iterable[N], adjacency: Mapping[N, Sequence[N]]) -> set[N]:
    """Forward closure of ``start`` under ``adjacency``."""
    seen = set(start)
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for w in adjacency.get(v, ()):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def bottom_sccs(
    nodes: Sequence[N], adjacency: Mapping[N, Sequence[N]]
) -> list[list[N]]:
    """SCCs with no outgoing edges; a finite Markov chain is absorbed into these."""
    comps = tarjan_sccs(nodes, adjacency)
    comp_of = {n: i for i, comp in enumerate(comps) for n in comp}
    bottom = []
    for i, comp in enumerate(comps):
        if all(comp_of[m] == i for n in comp for m in adjacency.get(n, ())):
            bottom.append(comp)
    return bottom
