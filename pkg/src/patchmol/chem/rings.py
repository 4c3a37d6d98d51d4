"""Ring perception: bounded simple-cycle enumeration, bridges, cycle rank."""

from __future__ import annotations

from typing import Sequence

from patchmol.chem.graph import MolGraph

MIN_RING = 3
MAX_RING = 8


def simple_cycles(
    neighbors: Sequence[Sequence[int]], min_len: int = MIN_RING, max_len: int = MAX_RING
) -> list[tuple[int, ...]]:
    """All simple cycles with ``min_len <= length <= max_len``.

    Each cycle is reported once, starting at its smallest vertex and walking
    toward the smaller of that vertex's two cycle neighbours, which is the
    lexicographically smallest rotation/reflection. The list is sorted.
    """
    cycles = []
    n = len(neighbors)
    for s in range(n):
        # hop distance back to s inside the vertices >= s, for depth pruning
        back = {s: 0}
        frontier = [s]
        for depth in range(1, max_len // 2 + 1):
            nxt = []
            for a in frontier:
                for nb in neighbors[a]:
                    if nb > s and nb not in back:
                        back[nb] = depth
                        nxt.append(nb)
            frontier = nxt
        path = [s]
        on_path = {s}
        # iterative DFS over (vertex, neighbour iterator)
        stack = [iter(neighbors[s])]
        while stack:
            advanced = False
            for nb in stack[-1]:
                if nb == s:
                    if len(path) >= min_len and path[1] < path[-1]:
                        cycles.append(tuple(path))
                    continue
                if nb < s or nb in on_path or len(path) + back.get(nb, max_len) > max_len:
                    continue
                path.append(nb)
                on_path.add(nb)
                stack.append(iter(neighbors[nb]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
    cycles.sort()
    return cycles


def perceive_rings(g: MolGraph) -> list[tuple[int, ...]]:
    """Simple cycles of length 3 to 8 as ordered atom-index tuples."""
    return simple_cycles(g.neighbors)


def bridges(neighbors: Sequence[Sequence[int]]) -> set[tuple[int, int]]:
    """Bridge edges ``(u, v)`` with ``u < v`` (edges on no cycle of any length)."""
    n = len(neighbors)
    disc = [-1] * n
    low = [0] * n
    out: set[tuple[int, int]] = set()
    t = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(neighbors[root]))]
        while stack:
            u, parent, it = stack[-1]
            pushed = False
            for v in it:
                if v == parent:
                    continue
                if disc[v] < 0:
                    disc[v] = low[v] = t
                    t += 1
                    stack.append((v, u, iter(neighbors[v])))
                    pushed = True
                    break
                low[u] = min(low[u], disc[v])
            if pushed:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    out.add((min(u, parent), max(u, parent)))
    return out


def cycle_rank(n_nodes: int, edges: Sequence[tuple[int, int]]) -> int:
    """Cyclomatic number E - V + C of the graph induced by ``edges``."""
    parent = list(range(n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    rank = 0
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            rank += 1
        else:
            parent[ru] = rv
    return rank


def ring_edges(cycle: Sequence[int]) -> list[tuple[int, int]]:
    k = len(cycle)
    return [
        (min(cycle[a], cycle[(a + 1) % k]), max(cycle[a], cycle[(a + 1) % k]))
        for a in range(k)
    ]
