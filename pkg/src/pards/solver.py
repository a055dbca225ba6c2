"""Depth-first branch and bound for minimum covers, and the dominating-set front door.

The search keeps one incumbent size ``q`` for the whole run.  Each node
first checks ``lb + r >= q`` (``r`` = vertices already committed on the path
from the root), then applies reduction rules until none fires, and finally
branches on one UB vertex: include it (drop everything it covers) or
exclude it.  Both children get a fresh LP bound, optionally lifted by the
LP cascade in :mod:`pards.bounds`.
"""

from __future__ import annotations

import enum
import hashlib
import random
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import ceil_eps, lp_value, multi_lp, should_tighten
from .branching import ldpb_select, maxdeg_select
from .config import Config
from .graph import BipartiteInstance, ContractError, Graph, build_instance
from .reductions import Branch, apply_rule, find_rule, reconstruct, rule7_solve


class Status(enum.Enum):
    OPTIMAL = "optimal"
    TIMEOUT = "timeout"
    INFEASIBLE = "infeasible"


@dataclass
class SearchStats:
    s_num: int = 0
    lp_calls: int = 0
    multilp_calls: int = 0
    multilp_tightened: int = 0
    rule_fires: list[int] = field(default_factory=lambda: [0] * 9)
    nodes_pruned_by_bound: int = 0
    ldpb_fallbacks: int = 0
    wall_time: float = 0.0

    def counters(self) -> dict:
        """Everything except wall time; equal for reproduced runs."""
        return {
            "s_num": self.s_num,
            "lp_calls": self.lp_calls,
            "multilp_calls": self.multilp_calls,
            "multilp_tightened": self.multilp_tightened,
            "rule_fires": list(self.rule_fires),
            "nodes_pruned_by_bound": self.nodes_pruned_by_bound,
            "ldpb_fallbacks": self.ldpb_fallbacks,
        }


@dataclass
class SolveResult:
    status: Status
    solution: frozenset[int] | None
    stats: SearchStats
    labels: list | None = None

    @property
    def size(self) -> int | None:
        return None if self.solution is None else len(self.solution)


class SearchTimeout(Exception):
    pass


class SearchContext:
    """Shared state of one search: incumbent, statistics, RNG seed, deadline."""

    def __init__(self, config: Config, q: int, best: set[int] | None = None):
        self.config = config
        self.q = q
        self.best_solution = None if best is None else set(best)
        self.stats = SearchStats()
        self.deadline = (None if config.time_limit_seconds is None
                         else time.monotonic() + config.time_limit_seconds)
        # reconstruction traces of the frames on the current root-to-node path
        self.stack: list[list] = []

    def rng_for(self, h: BipartiteInstance, salt: str) -> random.Random:
        """RNG seeded from the run seed and the node's state.

        Keying on the instance rather than on call order keeps choices at a
        given search node identical across runs that prune differently.
        """
        ub, ud = h.signature()
        digest = hashlib.blake2b(digest_size=8)
        digest.update(f"{self.config.seed}:{salt}:{len(ub)}:{len(ud)}:".encode())
        digest.update(np.asarray(ub, dtype=np.int64).tobytes())
        digest.update(np.asarray(ud, dtype=np.int64).tobytes())
        return random.Random(int.from_bytes(digest.digest(), "little"))

    def check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout

    def offer(self, leaf: set[int], r: int) -> None:
        """Record a complete solution found at a leaf if it beats the incumbent."""
        total = len(leaf) + r
        if total < self.q:
            full = set(leaf)
            for trace in reversed(self.stack):
                full = reconstruct(trace, full)
            if len(full) != total:
                raise RuntimeError(f"reconstructed size {len(full)} != expected {total}")
            self.q = total
            self.best_solution = full


def pards(h: BipartiteInstance, lb: int, r: int, ctx: SearchContext) -> set[int] | None:
    """Minimum cover of ``h`` if one can beat the incumbent, else ``None``.

    ``h`` is owned by the call and is modified.  A returned set is in ``h``'s
    node ids; the caller adds whatever it committed on the way down.
    """
    ctx.check_deadline()
    if lb + r >= ctx.q:
        ctx.stats.nodes_pruned_by_bound += 1
        return None
    if h.deg_ud.get(0):
        return None
    trace: list = []
    ctx.stack.append(trace)
    try:
        while h.adj_ud:
            match = find_rule(h, ctx.config.rules)
            if match is None:
                sub = _branch(h, r, ctx)
                return None if sub is None else reconstruct(trace, sub)
            ctx.stats.rule_fires[match.rule - 1] += 1
            if match.rule == 7:
                leaf = rule7_solve(h)
                break
            h, entry, delta = apply_rule(h, match, inplace=True)
            trace.append(entry)
            r += delta
            lb = max(lb - delta, 0)
        else:
            leaf = set()
        ctx.offer(leaf, r)
        return reconstruct(trace, leaf)
    finally:
        ctx.stack.pop()


def _child_bound(child: BipartiteInstance, r: int, ctx: SearchContext) -> int:
    sol = lp_value(child, ctx.stats)
    lb = ceil_eps(sol)
    cfg = ctx.config
    if cfg.multilp_enabled and should_tighten(sol, lb, r, ctx.q, child, cfg):
        lb = multi_lp(child, lb, ctx.rng_for(child, "multilp"), ctx.stats)
    return lb


def _branch(h: BipartiteInstance, r: int, ctx: SearchContext) -> set[int] | None:
    ctx.stats.s_num += 1
    if ctx.config.branching == "ldpb" and h.deg_ub.max_degree() >= 3:
        s = ldpb_select(h, ctx.rng_for(h, "ldpb"), ctx.stats)
    else:
        s = maxdeg_select(h)

    taken = h.copy()
    taken.remove_closed_neighborhood(s)
    skipped = h
    skipped.remove_ub(s)
    skipped_ok = not skipped.deg_ud.get(0)

    lb_taken = _child_bound(taken, r, ctx)
    lb_skipped = _child_bound(skipped, r, ctx) if skipped_ok else None

    q_entry = ctx.q
    trace = ctx.stack[-1]
    trace.append(Branch(s, True))
    try:
        with_s = pards(taken, lb_taken, r + 1, ctx)
    finally:
        trace.pop()
    if with_s is not None:
        with_s.add(s)

    without_s = None
    if skipped_ok:
        trace.append(Branch(s, False))
        try:
            without_s = pards(skipped, lb_skipped, r, ctx)
        finally:
            trace.pop()

    options = [x for x in (with_s, without_s) if x is not None]
    if not options:
        return None
    best = min(options, key=len)
    if len(best) + r < q_entry:
        ctx.q = min(ctx.q, len(best) + r)
        return best
    return None


def _run(h: BipartiteInstance, config: Config, q: int, best: set[int] | None) -> tuple[Status, set[int] | None, SearchStats]:
    ctx = SearchContext(config, q, best)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(h.adj_ub) + 1000))
    try:
        found = pards(h, 0, 0, ctx)
        status = Status.OPTIMAL
        if found is None:
            found = ctx.best_solution
    except SearchTimeout:
        status = Status.TIMEOUT
        found = ctx.best_solution
    finally:
        sys.setrecursionlimit(limit)
    return status, found, ctx.stats


def solve_pds(h: BipartiteInstance, config: Config | None = None) -> SolveResult:
    """Minimum set of UB nodes covering every UD node."""
    config = config or Config()
    start = time.perf_counter()
    if h.uncoverable():
        stats = SearchStats(wall_time=time.perf_counter() - start)
        return SolveResult(Status.INFEASIBLE, None, stats)
    status, found, stats = _run(h.copy(), config, len(h.adj_ub) + 1, None)
    stats.wall_time = time.perf_counter() - start
    if found is not None and not verify_solution(h, found):
        raise RuntimeError("search returned an invalid cover")
    solution = None if found is None else frozenset(found)
    labels = None if solution is None else [h.origin[v] for v in sorted(solution)]
    return SolveResult(status, solution, stats, labels)


def solve_mds(g: Graph, config: Config | None = None) -> SolveResult:
    """Minimum dominating set of ``g`` (solution in vertex ids)."""
    config = config or Config()
    start = time.perf_counter()
    h = build_instance(g)
    trivial = set(range(g.vertex_count))
    status, found, stats = _run(h, config, g.vertex_count, trivial)
    stats.wall_time = time.perf_counter() - start
    if found is None:
        found = trivial
    vertices = frozenset(h.origin[v] for v in found)
    if not verify_solution(g, vertices):
        raise RuntimeError("search returned a non-dominating set")
    labels = [g.label(v) for v in sorted(vertices)]
    return SolveResult(status, vertices, stats, labels)


def verify_solution(target: Graph | BipartiteInstance, candidate) -> bool:
    """True iff ``candidate`` dominates every graph vertex / covers every UD node."""
    cand = set(candidate)
    if isinstance(target, Graph):
        if not all(isinstance(v, (int, np.integer)) and 0 <= v < target.vertex_count for v in cand):
            return False
        dominated = set(cand)
        for v in cand:
            dominated |= target.adjacency[v]
        return len(dominated) == target.vertex_count
    if isinstance(target, BipartiteInstance):
        if not cand <= target.adj_ub.keys():
            return False
        return all(nbrs & cand for nbrs in target.adj_ud.values())
    raise ContractError(f"cannot verify against {type(target).__name__}")
