"""Simple graphs and the two-part covering instances the solver works on.

A :class:`BipartiteInstance` has a candidate side ``UB`` and a to-cover side
``UD``.  Edges only run across the two sides.  Node ids are plain integers;
the two sides share one id space so an id never names two nodes.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence


class ContractError(ValueError):
    """Raised when an operation is called outside its precondition."""


class Part(enum.Enum):
    UB = "ub"
    UD = "ud"


UB = Part.UB
UD = Part.UD


@dataclass
class Graph:
    """Undirected simple graph on vertices ``0..vertex_count-1``.

    ``labels`` optionally keeps the vertex names read from a file so results
    can be reported in the caller's numbering.
    """

    vertex_count: int
    adjacency: list[set[int]] = field(default_factory=list)
    labels: list[Hashable] | None = None

    def __post_init__(self):
        if not self.adjacency:
            self.adjacency = [set() for _ in range(self.vertex_count)]
        if len(self.adjacency) != self.vertex_count:
            raise ContractError("adjacency length does not match vertex_count")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        g = cls(n, labels=labels)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ContractError(f"self-loop on {u}")
        if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
            raise ContractError(f"edge ({u}, {v}) out of range")
        self.adjacency[u].add(v)
        self.adjacency[v].add(u)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in sorted(self.adjacency[u]) if u < v]

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def closed_neighborhood(self, v: int) -> set[int]:
        return self.adjacency[v] | {v}

    def label(self, v: int) -> Hashable:
        return self.labels[v] if self.labels is not None else v

    def check(self) -> None:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v == u:
                    raise ContractError(f"self-loop on {u}")
                if not 0 <= v < self.vertex_count:
                    raise ContractError(f"neighbor {v} of {u} out of range")
                if u not in self.adjacency[v]:
                    raise ContractError(f"asymmetric edge ({u}, {v})")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.adjacency == other.adjacency


class DegreeIndex:
    """Buckets of nodes keyed by current degree, for one side of an instance."""

    __slots__ = ("buckets",)

    def __init__(self):
        self.buckets: dict[int, set[int]] = defaultdict(set)

    def copy(self) -> "DegreeIndex":
        other = DegreeIndex()
        for k, nodes in self.buckets.items():
            if nodes:
                other.buckets[k] = set(nodes)
        return other

    def add(self, node: int, k: int) -> None:
        self.buckets[k].add(node)

    def discard(self, node: int, k: int) -> None:
        bucket = self.buckets.get(k)
        if bucket is not None:
            bucket.discard(node)
            if not bucket:
                del self.buckets[k]

    def move(self, node: int, old: int, new: int) -> None:
        self.discard(node, old)
        self.add(node, new)

    def get(self, k: int) -> set[int]:
        return self.buckets.get(k, set())

    def max_degree(self) -> int:
        return max(self.buckets, default=0)


class BipartiteInstance:
    """Working instance: ``UB`` nodes must cover every ``UD`` node.

    Mutating methods (``remove_*``, ``merge``) change the instance in place and
    keep the degree buckets in sync.  The module-level functions
    :func:`delete_nodes` and :func:`identify` are the copying variants.
    """

    __slots__ = ("adj_ub", "adj_ud", "origin", "deg_ub", "deg_ud", "next_id")

    def __init__(self):
        self.adj_ub: dict[int, set[int]] = {}
        self.adj_ud: dict[int, set[int]] = {}
        self.origin: dict[int, Hashable] = {}
        self.deg_ub = DegreeIndex()
        self.deg_ud = DegreeIndex()
        self.next_id = 0

    @classmethod
    def from_adjacency(cls, ub: dict[int, Iterable[int]], ud: Sequence[int] | None = None,
                       origin: dict[int, Hashable] | None = None) -> "BipartiteInstance":
        """Build from ``{ub_node: ud_neighbors}``; ``ud`` lists UD nodes that may be isolated."""
        h = cls()
        ud_nodes = set(ud or ())
        for nbrs in ub.values():
            ud_nodes.update(nbrs)
        overlap = ud_nodes & set(ub)
        if overlap:
            raise ContractError(f"ids used on both sides: {sorted(overlap)}")
        for u in sorted(ub):
            h.adj_ub[u] = set()
        for d in sorted(ud_nodes):
            h.adj_ud[d] = set()
        for u, nbrs in ub.items():
            for d in nbrs:
                h.adj_ub[u].add(d)
                h.adj_ud[d].add(u)
        for u, nbrs in h.adj_ub.items():
            h.deg_ub.add(u, len(nbrs))
        for d, nbrs in h.adj_ud.items():
            h.deg_ud.add(d, len(nbrs))
        h.origin = {n: n for n in (*h.adj_ub, *h.adj_ud)}
        if origin:
            h.origin.update(origin)
        h.next_id = max((*h.adj_ub, *h.adj_ud), default=-1) + 1
        return h

    def copy(self) -> "BipartiteInstance":
        h = BipartiteInstance.__new__(BipartiteInstance)
        h.adj_ub = {k: set(v) for k, v in self.adj_ub.items()}
        h.adj_ud = {k: set(v) for k, v in self.adj_ud.items()}
        h.origin = dict(self.origin)
        h.deg_ub = self.deg_ub.copy()
        h.deg_ud = self.deg_ud.copy()
        h.next_id = self.next_id
        return h

    # -- queries -------------------------------------------------------------

    @property
    def ub(self) -> list[int]:
        return sorted(self.adj_ub)

    @property
    def ud(self) -> list[int]:
        return sorted(self.adj_ud)

    def part_of(self, node: int) -> Part:
        if node in self.adj_ub:
            return UB
        if node in self.adj_ud:
            return UD
        raise ContractError(f"unknown node {node}")

    def adj(self, node: int) -> set[int]:
        nbrs = self.adj_ub.get(node)
        if nbrs is None:
            nbrs = self.adj_ud.get(node)
            if nbrs is None:
                raise ContractError(f"unknown node {node}")
        return nbrs

    def degree(self, node: int) -> int:
        return len(self.adj(node))

    def index(self, part: Part) -> DegreeIndex:
        return self.deg_ub if part is UB else self.deg_ud

    def edge_count(self) -> int:
        return sum(len(n) for n in self.adj_ub.values())

    def uncoverable(self) -> list[int]:
        """UD nodes with no UB neighbor; any such node makes the instance infeasible."""
        return sorted(self.deg_ud.get(0))

    def signature(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(sorted(self.adj_ub)), tuple(sorted(self.adj_ud))

    # -- in-place mutation ---------------------------------------------------

    def remove_ub(self, node: int) -> None:
        nbrs = self.adj_ub.pop(node, None)
        if nbrs is None:
            raise ContractError(f"{node} is not a UB node")
        self.deg_ub.discard(node, len(nbrs))
        for d in nbrs:
            other = self.adj_ud[d]
            self.deg_ud.move(d, len(other), len(other) - 1)
            other.discard(node)

    def remove_ud(self, node: int) -> None:
        nbrs = self.adj_ud.pop(node, None)
        if nbrs is None:
            raise ContractError(f"{node} is not a UD node")
        self.deg_ud.discard(node, len(nbrs))
        for u in nbrs:
            other = self.adj_ub[u]
            self.deg_ub.move(u, len(other), len(other) - 1)
            other.discard(node)

    def remove(self, ub_nodes: Iterable[int] = (), ud_nodes: Iterable[int] = ()) -> None:
        ub_nodes, ud_nodes = list(ub_nodes), list(ud_nodes)
        for n in ub_nodes:
            if n not in self.adj_ub:
                raise ContractError(f"{n} is not a UB node")
        for n in ud_nodes:
            if n not in self.adj_ud:
                raise ContractError(f"{n} is not a UD node")
        for n in ub_nodes:
            self.remove_ub(n)
        for n in ud_nodes:
            self.remove_ud(n)

    def remove_closed_neighborhood(self, node: int) -> set[int]:
        """Delete a UB node together with every UD node it covers; returns the covered set."""
        covered = set(self.adj_ub[node])
        self.remove_ub(node)
        for d in covered:
            self.remove_ud(d)
        return covered

    def merge(self, part: Part, a: int, b: int) -> int:
        """Identify ``a`` and ``b`` on one side into a fresh node; returns its id."""
        if a == b:
            raise ContractError("cannot identify a node with itself")
        own = self.adj_ub if part is UB else self.adj_ud
        other = self.adj_ud if part is UB else self.adj_ub
        own_idx, other_idx = self.index(part), self.index(UD if part is UB else UB)
        if a not in own or b not in own:
            raise ContractError(f"{a} and {b} must both be {part.value} nodes")
        s = self.next_id
        self.next_id += 1
        nbrs = own[a] | own[b]
        for n in (a, b):
            own_idx.discard(n, len(own[n]))
            del own[n]
        for x in nbrs:
            adj_x = other[x]
            before = len(adj_x)
            adj_x.discard(a)
            adj_x.discard(b)
            adj_x.add(s)
            if len(adj_x) != before:
                other_idx.move(x, before, len(adj_x))
        own[s] = nbrs
        own_idx.add(s, len(nbrs))
        self.origin[s] = ("merge", a, b)
        return s

    # -- checks --------------------------------------------------------------

    def check(self) -> None:
        """Raise :class:`ContractError` if any structural invariant is broken."""
        if set(self.adj_ub) & set(self.adj_ud):
            raise ContractError("UB and UD share node ids")
        for u, nbrs in self.adj_ub.items():
            for d in nbrs:
                if d not in self.adj_ud:
                    raise ContractError(f"UB {u} points at non-UD node {d}")
                if u not in self.adj_ud[d]:
                    raise ContractError(f"asymmetric edge {u}-{d}")
        for d, nbrs in self.adj_ud.items():
            for u in nbrs:
                if u not in self.adj_ub or d not in self.adj_ub[u]:
                    raise ContractError(f"asymmetric edge {u}-{d}")
        for adj, idx in ((self.adj_ub, self.deg_ub), (self.adj_ud, self.deg_ud)):
            expected: dict[int, set[int]] = defaultdict(set)
            for n, nbrs in adj.items():
                expected[len(nbrs)].add(n)
            actual = {k: v for k, v in idx.buckets.items() if v}
            if actual != dict(expected):
                raise ContractError("degree index out of sync")

    def __eq__(self, other):
        if not isinstance(other, BipartiteInstance):
            return NotImplemented
        return self.adj_ub == other.adj_ub and self.adj_ud == other.adj_ud

    def __repr__(self):
        return f"BipartiteInstance(|UB|={len(self.adj_ub)}, |UD|={len(self.adj_ud)}, m={self.edge_count()})"


def build_instance(g: Graph) -> BipartiteInstance:
    """Covering instance of ``g``: UB copy of ``u`` covers UD copy of every ``v`` in N[u].

    UB copies use ids ``0..n-1`` and UD copies ``n..2n-1``; both map back to
    the graph vertex through ``origin``.
    """
    n = g.vertex_count
    ub = {u: {n + v for v in g.adjacency[u]} | {n + u} for u in range(n)}
    origin = {u: u for u in range(n)}
    origin.update({n + u: u for u in range(n)})
    return BipartiteInstance.from_adjacency(ub, origin=origin)


def delete_nodes(h: BipartiteInstance, ub_del: Iterable[int] = (), ud_del: Iterable[int] = ()) -> BipartiteInstance:
    out = h.copy()
    out.remove(ub_del, ud_del)
    return out


def identify(h: BipartiteInstance, part: Part, a: int, b: int) -> tuple[BipartiteInstance, int]:
    out = h.copy()
    s = out.merge(part, a, b)
    return out, s


def degree_class(h: BipartiteInstance, part: Part, k: int) -> set[int]:
    return set(h.index(part).get(k))
