"""Reduction rules for the cover instance, their reconstruction trace, and the degree-2 base case.

Rules are tried in priority order 1..9 and the first applicable one is
applied.  Rules 1, 5, 6 and 8 commit one vertex to the solution (the
optimum drops by one); the others keep the optimum unchanged.  Rule 7
(every UB node has degree at most two) is solved directly by maximum
matching.

Each applied rule yields a trace entry holding what is needed to turn a
solution of the reduced instance back into a solution of the original one.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Union

from .config import ALL_RULES
from .graph import UB, UD, BipartiteInstance, ContractError
from .matching import max_matching

COMMITTING_RULES = frozenset({1, 5, 6, 8})


class InfeasibleError(ValueError):
    """A UD node has no UB neighbor left, so no cover exists."""


@dataclass(frozen=True)
class RuleMatch:
    """Rule number plus witness nodes.

    Payload layout per rule: 1 ``(u, v)``; 2 ``(u,)``; 3 ``(u1, u2)`` with
    ``u1`` deleted; 4 ``(u1, u2)`` with ``u2`` deleted; 5 and 6
    ``(u, u1, u2, v1, v2)``; 7 ``()``; 8 ``(u, v_i, u_i)``; 9 ``(u, v1, v2, v)``.
    """

    rule: int
    payload: tuple


@dataclass(frozen=True)
class Include:
    v: int
    removed: frozenset[int]


@dataclass(frozen=True)
class DeleteUB:
    v: int


@dataclass(frozen=True)
class DeleteUD:
    v: int


@dataclass(frozen=True)
class IdentifyUD:
    u: int
    u1: int
    u2: int
    v1: int
    v2: int
    v: int
    saved_adj_v1: frozenset[int]


@dataclass(frozen=True)
class IdentifyUB:
    u: int
    u1: int
    u2: int
    v1: int
    v2: int
    v: int


@dataclass(frozen=True)
class Branch:
    s: int
    included: bool


TraceEntry = Union[Include, DeleteUB, DeleteUD, IdentifyUD, IdentifyUB, Branch]


# -- detection ---------------------------------------------------------------

def _rule1(h):
    ones = h.deg_ud.get(1)
    if ones:
        u = min(ones)
        return (u, next(iter(h.adj_ud[u])))
    return None


def _rule2(h):
    # the covered node needs another cover; rule 1 guarantees that unless masked off
    for u in sorted(h.deg_ub.get(1)):
        (d,) = h.adj_ub[u]
        if len(h.adj_ud[d]) >= 2:
            return (u,)
    return None


def _contained(adj_own, adj_other, node):
    """Smallest other node whose neighborhood contains that of ``node``."""
    nbrs = adj_own[node]
    count: Counter = Counter()
    for d in nbrs:
        count.update(adj_other[d])
    need = len(nbrs)
    best = None
    for w, c in count.items():
        if c == need and w != node and (best is None or w < best):
            best = w
    return best


def _rule3(h):
    if len(h.adj_ub) >= 2:
        empty = h.deg_ub.get(0)
        if empty:
            u1 = min(empty)
            return (u1, min(u for u in h.adj_ub if u != u1))
    for u1 in sorted(h.adj_ub):
        u2 = _contained(h.adj_ub, h.adj_ud, u1)
        if u2 is not None:
            return (u1, u2)
    return None


def _rule4(h):
    for u1 in sorted(h.adj_ud):
        if not h.adj_ud[u1]:
            continue
        u2 = _contained(h.adj_ud, h.adj_ub, u1)
        if u2 is not None:
            return (u1, u2)
    return None


def _gadget(h, u, own, other):
    u1, u2 = sorted(own[u])
    if len(other[u1]) != 2 or len(other[u2]) != 2:
        return None
    (v1,) = other[u1] - {u}
    (v2,) = other[u2] - {u}
    if v1 == v2:
        return None
    return (u, u1, u2, v1, v2)


def _rule5(h):
    for u in sorted(h.deg_ud.get(2)):
        hit = _gadget(h, u, h.adj_ud, h.adj_ub)
        if hit is not None:
            _, u1, u2, v1, v2 = hit
            if (h.adj_ud[v1] | h.adj_ud[v2]) - {u1, u2}:
                return hit
    return None


def _rule6(h):
    for u in sorted(h.deg_ub.get(2)):
        hit = _gadget(h, u, h.adj_ub, h.adj_ud)
        if hit is not None:
            return hit
    return None


def _rule7(h):
    return () if h.deg_ub.max_degree() <= 2 else None


def _rule8(h):
    adj_ub, adj_ud = h.adj_ub, h.adj_ud
    two = h.deg_ud.get(2)
    if not two:
        return None
    for u in sorted(adj_ub):
        pairs = []
        for v in sorted(adj_ub[u] & two):
            (other,) = adj_ud[v] - {u}
            pairs.append((v, other))
        if not pairs:
            continue
        partners = {o for _, o in pairs}
        count: Counter = Counter()
        for o in partners:
            count.update(adj_ub[o])
        for v, o in pairs:
            # a partner shared by several v_i covers all of them after the swap
            own = {w for w, p in pairs if p == o}
            if all(count[w] >= 2 for w in adj_ub[o] - own):
                return (u, v, o)
    return None


def _rule9(h):
    adj_ub, adj_ud = h.adj_ub, h.adj_ud
    for u in sorted(h.deg_ud.get(2)):
        v1, v2 = sorted(adj_ud[u])
        region = adj_ub[v1] | adj_ub[v2]
        count: Counter = Counter()
        for w in region:
            count.update(adj_ud[w])
        best = None
        for x, c in count.items():
            if x != v1 and x != v2 and c == len(adj_ub[x]) and (best is None or x < best):
                best = x
        if best is not None:
            return (u, v1, v2, best)
    return None


_DETECTORS = {1: _rule1, 2: _rule2, 3: _rule3, 4: _rule4, 5: _rule5,
              6: _rule6, 7: _rule7, 8: _rule8, 9: _rule9}


def detect(h: BipartiteInstance, rule: int) -> RuleMatch | None:
    """Check one rule in isolation (ignores priority)."""
    payload = _DETECTORS[rule](h)
    return None if payload is None else RuleMatch(rule, payload)


def find_rule(h: BipartiteInstance, rules: Iterable[int] = ALL_RULES) -> RuleMatch | None:
    """Lowest-numbered enabled rule that applies to ``h``, with its witness."""
    enabled = set(rules)
    for k in range(1, 10):
        if k in enabled:
            payload = _DETECTORS[k](h)
            if payload is not None:
                return RuleMatch(k, payload)
    return None


# -- application -------------------------------------------------------------

def apply_rule(h: BipartiteInstance, match: RuleMatch, inplace: bool = False):
    """Apply ``match`` and return ``(reduced, trace_entry, delta_r)``."""
    if not inplace:
        h = h.copy()
    k, p = match.rule, match.payload
    if k in (1, 8):
        v = p[1] if k == 1 else p[0]
        removed = h.remove_closed_neighborhood(v)
        entry: TraceEntry = Include(v, frozenset(removed))
    elif k == 2:
        h.remove_ub(p[0])
        entry = DeleteUB(p[0])
    elif k == 3:
        h.remove_ub(p[0])
        entry = DeleteUB(p[0])
    elif k == 4:
        h.remove_ud(p[1])
        entry = DeleteUD(p[1])
    elif k == 5:
        u, u1, u2, v1, v2 = p
        if v1 == v2:
            raise ContractError("rule 5 gadget with v1 == v2")
        saved = frozenset(h.adj_ud[v1])
        h.remove_ud(u)
        h.remove_ub(u1)
        h.remove_ub(u2)
        v = h.merge(UD, v1, v2)
        entry = IdentifyUD(u, u1, u2, v1, v2, v, saved)
    elif k == 6:
        u, u1, u2, v1, v2 = p
        if v1 == v2:
            raise ContractError("rule 6 gadget with v1 == v2")
        h.remove_ub(u)
        h.remove_ud(u1)
        h.remove_ud(u2)
        v = h.merge(UB, v1, v2)
        entry = IdentifyUB(u, u1, u2, v1, v2, v)
    elif k == 9:
        h.remove_ub(p[3])
        entry = DeleteUB(p[3])
    elif k == 7:
        raise ContractError("rule 7 is solved by rule7_solve, not applied")
    else:
        raise ContractError(f"unknown rule {k}")
    return h, entry, (1 if k in COMMITTING_RULES else 0)


def reconstruct(trace: list[TraceEntry], leaf_solution: Iterable[int]) -> set[int]:
    """Unwind ``trace`` (in application order) over a solution of the last instance."""
    sol = set(leaf_solution)
    for e in reversed(trace):
        if isinstance(e, Include):
            sol.add(e.v)
        elif isinstance(e, (DeleteUB, DeleteUD)):
            pass
        elif isinstance(e, IdentifyUD):
            sol.add(e.u2 if sol & e.saved_adj_v1 else e.u1)
        elif isinstance(e, IdentifyUB):
            if e.v in sol:
                sol.discard(e.v)
                sol.update((e.v1, e.v2))
            else:
                sol.add(e.u)
        elif isinstance(e, Branch):
            if e.included:
                sol.add(e.s)
        else:
            raise ContractError(f"malformed trace entry {e!r}")
    return sol


def rule7_solve(h: BipartiteInstance) -> set[int]:
    """Minimum cover when every UB node has degree <= 2.

    Each degree-2 UB node is an edge between its two UD neighbors; a minimum
    edge cover of that graph (matching plus one extra edge per unmatched
    node) gives a cover of size ``|UD| - matching size``.
    """
    if h.deg_ub.max_degree() > 2:
        raise ContractError("rule 7 needs every UB degree <= 2")
    label: dict[tuple[int, int], int] = {}
    graph: dict[int, set[int]] = {d: set() for d in h.adj_ud}
    for u in sorted(h.adj_ub):
        nbrs = h.adj_ub[u]
        if len(nbrs) == 2:
            a, b = sorted(nbrs)
            if (a, b) not in label:
                label[(a, b)] = u
                graph[a].add(b)
                graph[b].add(a)
    matching = max_matching(graph)
    sol = {label[e] for e in matching}
    matched = {x for e in matching for x in e}
    for d in sorted(h.adj_ud):
        if d not in matched:
            if not h.adj_ud[d]:
                raise InfeasibleError(f"UD node {d} cannot be covered")
            sol.add(min(h.adj_ud[d]))
    return sol


def matching_graph(h: BipartiteInstance) -> dict[int, set[int]]:
    """The UD-side graph whose edges are degree-2 UB nodes (used by rule 7)."""
    graph: dict[int, set[int]] = {d: set() for d in h.adj_ud}
    for nbrs in h.adj_ub.values():
        if len(nbrs) == 2:
            a, b = nbrs
            graph[a].add(b)
            graph[b].add(a)
    return graph
