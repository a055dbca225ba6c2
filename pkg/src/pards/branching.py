"""Choice of the UB vertex to branch on.

``ldpb_select`` looks at the maximum UB degree ``d`` and picks among the
degree-``d`` (or degree-3) candidates by lexicographic comparison of their
neighbors' degree sequences.  Ties go to the smallest node id; the only
random choice is drawn from the ``rng`` the caller passes in.
"""

from __future__ import annotations

import random

from .graph import BipartiteInstance, ContractError


def degree_key(h: BipartiteInstance, v: int, order: str = "ascending") -> tuple[int, ...]:
    degs = sorted(len(h.adj(w)) for w in h.adj(v))
    if order == "descending":
        degs.reverse()
    elif order != "ascending":
        raise ValueError(f"unknown order {order!r}")
    return tuple(degs)


def _nodes_of_degree(h: BipartiteInstance, k: int) -> set[int]:
    """Nodes of either side with degree ``k``."""
    return h.deg_ub.get(k) | h.deg_ud.get(k)


def maxdeg_select(h: BipartiteInstance) -> int:
    if not h.adj_ub:
        raise ContractError("nothing to branch on")
    return min(h.deg_ub.get(h.deg_ub.max_degree()))


def ldpb_select(h: BipartiteInstance, rng: random.Random, stats=None) -> int:
    if not h.adj_ub:
        raise ContractError("nothing to branch on")
    d = h.deg_ub.max_degree()
    if d < 3:
        raise ContractError(f"maximum UB degree {d} < 3; the degree-2 case is solved exactly")
    top = h.deg_ub.get(d)

    if d >= 4:
        cands = [v for v in sorted(h.adj_ud)
                 if len(h.adj_ud[v] & top) >= len(h.adj_ud[v]) - 1]
        if cands:
            s_prime = min(cands, key=lambda v: (len(h.adj_ud[v]), v))
            pool = h.adj_ud[s_prime] & top
            if pool:
                return min(pool, key=lambda s: (degree_key(h, s, "ascending"), s))
            if stats is not None:
                stats.ldpb_fallbacks += 1
        return rng.choice(sorted(top))

    # d == 3
    max3d = max((len(h.adj_ud[w]) for s in top for w in h.adj_ub[s]), default=0)
    if max3d >= 4:
        return max(sorted(top), key=lambda s: (degree_key(h, s, "descending"), -s))
    two = _nodes_of_degree(h, 2)
    return max(sorted(top), key=lambda s: (len(h.adj_ub[s] & two), -s))
