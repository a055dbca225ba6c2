"""Maximum-cardinality matching in general graphs (Edmonds' blossom algorithm)."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping

from .graph import Graph


def max_matching(graph: Graph | Mapping[Hashable, Iterable[Hashable]]) -> set[tuple]:
    """Return a maximum matching as a set of ``(a, b)`` pairs with ``a < b``.

    ``graph`` is a :class:`Graph` or an adjacency mapping with sortable
    vertex keys.  Runs in O(V^3).
    """
    if isinstance(graph, Graph):
        adjacency = {v: graph.adjacency[v] for v in range(graph.vertex_count)}
    else:
        adjacency = graph
    vertices = sorted(set(adjacency) | {w for nbrs in adjacency.values() for w in nbrs})
    index = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    adj: list[list[int]] = [[] for _ in range(n)]
    for v, nbrs in adjacency.items():
        for w in nbrs:
            if w != v:
                adj[index[v]].append(index[w])
                adj[index[w]].append(index[v])
    adj = [sorted(set(a)) for a in adj]

    mate = [-1] * n
    # greedy start; the augmenting phase fixes any suboptimal choices
    for v in range(n):
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    break

    for root in range(n):
        if mate[root] == -1:
            end, parent = _find_augmenting_path(adj, mate, root)
            while end != -1:
                pv = parent[end]
                nxt = mate[pv]
                mate[end], mate[pv] = pv, end
                end = nxt

    return {(vertices[i], vertices[j]) for i, j in enumerate(mate) if j > i}


def _find_augmenting_path(adj: list[list[int]], mate: list[int], root: int):
    n = len(adj)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
        while base[v] != b:
            in_blossom[base[v]] = in_blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = lca(v, to)
                in_blossom = [False] * n
                mark_path(v, cur, to, in_blossom)
                mark_path(to, cur, v, in_blossom)
                for i in range(n):
                    if in_blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    return to, parent
                used[mate[to]] = True
                queue.append(mate[to])
    return -1, parent
