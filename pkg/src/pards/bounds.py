"""Lower bounds on the minimum cover size of an instance.

The base bound rounds up the fractional covering optimum.  :func:`multi_lp`
tries to lift it by one: it fixes the total at the rounded value and solves a
cascade of LPs that each minimise the weight on one block of a random
partition of UB, feeding every optimum forward as a cut.  If any LP in the
cascade is infeasible, no cover of the rounded size exists.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .config import Config
from .graph import BipartiteInstance, ContractError
from .lp import build_partition_lp, build_relaxation, solve_lp

EPS = 1e-6


def ceil_eps(x: float) -> int:
    """Ceiling that ignores float noise within ``EPS`` above an integer."""
    if x < -EPS:
        raise ContractError(f"negative bound {x}")
    return max(0, math.ceil(x - EPS))


@dataclass(frozen=True)
class BoundReport:
    sol: float
    lb: int
    tightened: bool = False


@dataclass(frozen=True)
class PartitionFamily:
    groups: tuple[frozenset[int], ...]

    @property
    def k(self) -> int:
        return len(self.groups)

    def functions(self) -> list[dict[int, int]]:
        """Indicator weight function of each group."""
        return [{v: 1 for v in g} for g in self.groups]


def lp_value(h: BipartiteInstance, stats=None) -> float:
    """Optimum of the covering relaxation (0 when nothing is left to cover)."""
    if not h.adj_ud:
        return 0.0
    if stats is not None:
        stats.lp_calls += 1
    out = solve_lp(build_relaxation(h))
    if not out.optimal:
        # every UD node has a neighbor, so x = 1 is feasible
        raise ContractError("covering relaxation reported infeasible")
    return out.value


def base_bound(h: BipartiteInstance, stats=None) -> BoundReport:
    sol = lp_value(h, stats)
    return BoundReport(sol, ceil_eps(sol))


def make_partition(ub: Sequence[int], k: int, rng: random.Random) -> PartitionFamily:
    """Random split of ``ub`` into ``k`` blocks whose sizes differ by at most one.

    With ``|ub| = p*k + q`` the first ``k - q`` blocks get ``p`` nodes and the
    last ``q`` blocks get ``p + 1``.
    """
    nodes = sorted(ub)
    if not 1 <= k <= len(nodes):
        raise ContractError(f"k={k} must lie in 1..{len(nodes)}")
    rng.shuffle(nodes)
    p, q = divmod(len(nodes), k)
    sizes = [p] * (k - q) + [p + 1] * q
    groups, start = [], 0
    for size in sizes:
        groups.append(frozenset(nodes[start:start + size]))
        start += size
    return PartitionFamily(tuple(groups))


def multi_lp(h: BipartiteInstance, ceil_sol: int, rng: random.Random, stats=None) -> int:
    """Return ``ceil_sol + 1`` if the LP cascade proves no cover of size ``ceil_sol`` exists."""
    if ceil_sol <= 0 or ceil_sol > len(h.adj_ub):
        return ceil_sol
    if stats is not None:
        stats.multilp_calls += 1
    family = make_partition(h.ub, ceil_sol, rng)
    fs = family.functions()
    prior: list[int] = []
    for j in range(1, family.k + 1):
        model = build_partition_lp(h, fs, j, ceil_sol, prior)
        if stats is not None:
            stats.lp_calls += 1
        out = solve_lp(model)
        if not out.optimal:
            if stats is not None:
                stats.multilp_tightened += 1
            return ceil_sol + 1
        prior.append(ceil_eps(max(out.value, 0.0)))
    return ceil_sol


def should_tighten(sol: float, lb: int, r: int, q: int, h: BipartiteInstance, cfg: Config) -> bool:
    """Gate for running :func:`multi_lp` on a child whose LP bound is close to pruning."""
    if r < cfg.multilp_min_r or lb + r >= q or sol + r <= q - cfg.multilp_gap:
        return False
    n = len(h.adj_ub)
    if lb <= 0 or n == 0:
        return False
    m = h.edge_count() if cfg.multilp_density == "edges" else len(h.adj_ud)
    return n / lb <= (m / n) ** 2
