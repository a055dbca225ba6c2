"""Shared instances and helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from pards.graph import BipartiteInstance, Graph


def cover_instance(ub: dict[str, set[int]], ud_count: int | None = None) -> BipartiteInstance:
    """Small instance from ``{"a": {1, 2}, ...}`` with UB names and 1-based UD numbers.

    UB node ``i`` (in name order) gets id ``i``; UD number ``j`` gets id ``100 + j``.
    The UB names are kept as origin labels.
    """
    names = sorted(ub)
    adj = {i: {100 + j for j in ub[name]} for i, name in enumerate(names)}
    ud = [100 + j for j in range(1, (ud_count or 0) + 1)]
    origin = {i: name for i, name in enumerate(names)}
    return BipartiteInstance.from_adjacency(adj, ud, origin)


def ub_id(h: BipartiteInstance, name: str) -> int:
    return next(n for n, label in h.origin.items() if label == name and n in h.adj_ub)


def tri3() -> BipartiteInstance:
    return cover_instance({"a": {1, 2}, "b": {2, 3}, "c": {1, 3}})


def two_tri() -> BipartiteInstance:
    return cover_instance({"a": {1, 2}, "b": {2, 3}, "c": {1, 3},
                           "d": {4, 5}, "e": {5, 6}, "f": {4, 6}})


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


@pytest.fixture
def tri() -> BipartiteInstance:
    return tri3()
