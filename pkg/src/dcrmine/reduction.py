"""Transitive reduction of binary relations."""

from __future__ import annotations

from typing import Hashable, Iterable, TypeVar

N = TypeVar("N", bound=Hashable)


def _reach(succ: list[int]) -> list[int]:
    """Strict reachability (paths of length >= 1) per node, as bit vectors."""
    n = len(succ)
    reach = [0] * n
    for v in range(n):
        seen = 0
        stack = [v]
        while stack:
            u = stack.pop()
            frontier = succ[u] & ~seen
            seen |= frontier
            while frontier:
                low = frontier & -frontier
                stack.append(low.bit_length() - 1)
                frontier ^= low
        reach[v] = seen
    return reach


def transitive_reduction(relation: Iterable[tuple[N, N]]) -> set[tuple[N, N]]:
    """Drop every edge implied by a longer path.

    For an acyclic relation this is the unique minimal relation with the
    same transitive closure. Edges inside a strongly connected component
    are kept as they are; an edge between components is removed only when
    the target component is reachable through a third component.
    """
    edges = set(relation)
    if not edges:
        return set()
    nodes = sorted({x for e in edges for x in e}, key=repr)
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    succ = [0] * n
    for a, b in edges:
        succ[idx[a]] |= 1 << idx[b]
    reach = _reach(succ)

    # component of v: v plus everything on a cycle through v
    comp = [(1 << v) | sum(1 << u for u in range(n) if (reach[v] >> u) & 1 and (reach[u] >> v) & 1) for v in range(n)]

    kept = set()
    for a, b in edges:
        ia, ib = idx[a], idx[b]
        ca, cb = comp[ia], comp[ib]
        if ca == cb:
            kept.add((a, b))
            continue
        # redundant if some member of a's component exits into a third component reaching b
        redundant = False
        members = ca
        while members and not redundant:
            low = members & -members
            x = low.bit_length() - 1
            members ^= low
            exits = succ[x] & ~ca & ~cb
            while exits:
                lowe = exits & -exits
                y = lowe.bit_length() - 1
                exits ^= lowe
                if (reach[y] >> ib) & 1:
                    redundant = True
                    break
        if not redundant:
            kept.add((a, b))
    return kept
