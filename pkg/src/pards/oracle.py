"""Brute-force reference answers and instance generators.

The exhaustive searches here share no code with the solver (no rules, no
LPs): they enumerate candidate sets by increasing size over bitmasks, so the
first hit is a minimum.  Keep them that way; they are the yardstick.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .graph import BipartiteInstance, ContractError, Graph

MDS_GUARD = 25
PDS_GUARD = 22
KPDS_GUARD = 22
SAT_GUARD = 20


class GuardExceeded(ValueError):
    """Instance too large for exhaustive search."""


def _min_cover(masks: list[int], full: int, candidates: list[int]) -> tuple[int, ...] | None:
    """Smallest tuple of indices into ``masks`` whose union equals ``full``."""
    if full == 0:
        return ()
    reach = 0
    for m in masks:
        reach |= m
    if reach & full != full:
        return None
    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, size):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc & full == full:
                return combo
    return None


def brute_force_mds(g: Graph) -> set[int]:
    n = g.vertex_count
    if n > MDS_GUARD:
        raise GuardExceeded(f"{n} vertices > {MDS_GUARD}")
    masks = [(1 << v) | sum(1 << w for w in g.adjacency[v]) for v in range(n)]
    combo = _min_cover(masks, (1 << n) - 1, list(range(n)))
    return set(combo)


def brute_force_pds(h: BipartiteInstance) -> set[int] | None:
    """Minimum cover of all UD nodes by UB nodes; ``None`` if some UD node is isolated."""
    ub = sorted(h.adj_ub)
    if len(ub) > PDS_GUARD:
        raise GuardExceeded(f"|UB|={len(ub)} > {PDS_GUARD}")
    ud = sorted(h.adj_ud)
    bit = {d: 1 << i for i, d in enumerate(ud)}
    masks = [sum(bit[d] for d in h.adj_ub[u]) for u in ub]
    combo = _min_cover(masks, (1 << len(ud)) - 1, list(range(len(ub))))
    if combo is None:
        return None
    return {ub[i] for i in combo}


def pds_optimum(h: BipartiteInstance) -> int | None:
    sol = brute_force_pds(h)
    return None if sol is None else len(sol)


# -- generators --------------------------------------------------------------

def gen_gnm(n: int, m: int, seed: int) -> Graph:
    """Connected simple graph with ``n`` vertices and ``m`` edges.

    A uniform random labelled tree (Pruefer code) supplies connectivity; the
    remaining edges are sampled uniformly from the non-tree pairs.
    """
    if n < 0 or m < max(n - 1, 0) or m > n * (n - 1) // 2:
        raise ValueError(f"no connected simple graph with n={n}, m={m}")
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()
    if n >= 2:
        code = [rng.randrange(n) for _ in range(n - 2)]
        degree = [1] * n
        for x in code:
            degree[x] += 1
        for x in code:
            leaf = min(v for v in range(n) if degree[v] == 1)
            edges.add((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
        a, b = (v for v in range(n) if degree[v] == 1)
        edges.add((a, b))
    rest = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    edges.update(rng.sample(rest, m - len(edges)))
    return Graph.from_edges(n, sorted(edges))


def random_pds(n_ub: int, n_ud: int, density: float, seed: int, allow_isolated: bool = False) -> BipartiteInstance:
    """Random cover instance; each UB-UD pair is an edge with probability ``density``.

    Unless ``allow_isolated`` is set, UD nodes that end up with no neighbor
    are dropped.
    """
    rng = random.Random(seed)
    ub = {u: set() for u in range(n_ub)}
    ud = list(range(n_ub, n_ub + n_ud))
    for u in ub:
        for d in ud:
            if rng.random() < density:
                ub[u].add(d)
    if not allow_isolated:
        covered = set().union(*ub.values()) if ub else set()
        ud = [d for d in ud if d in covered]
    return BipartiteInstance.from_adjacency(ub, ud)


# -- 3-SAT and the k-part construction ---------------------------------------

@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise ContractError(f"clause {clause} does not have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ContractError(f"literal {lit} out of range 1..{self.num_vars}")


def random_3sat(n: int, m: int, seed: int) -> CnfFormula:
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3) if n >= 3 else [rng.randint(1, n) for _ in range(3)]
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


def unsat_core(n: int = 3) -> CnfFormula:
    """All 8 sign patterns over variables 1..3: unsatisfiable."""
    clauses = tuple(tuple(s * v for s, v in zip(signs, (1, 2, 3)))
                    for signs in itertools.product((1, -1), repeat=3))
    return CnfFormula(max(n, 3), clauses)


def satisfiable(f: CnfFormula) -> bool:
    """Decide by trying all ``2^n`` assignments."""
    if f.num_vars > SAT_GUARD:
        raise GuardExceeded(f"{f.num_vars} variables > {SAT_GUARD}")
    for bits in range(1 << f.num_vars):
        if all(any((bits >> (abs(l) - 1)) & 1 == (l > 0) for l in c) for c in f.clauses):
            return True
    return False


@dataclass
class KPartInstance:
    graph: Graph
    parts: list[list[int]]
    target: int

    def __post_init__(self):
        seen = sorted(v for p in self.parts for v in p)
        if seen != list(range(self.graph.vertex_count)):
            raise ContractError("parts must partition the vertex set")
        if not 0 <= self.target < len(self.parts):
            raise ContractError("target part out of range")


def literal_vertex(lit: int) -> int:
    """Vertex id of a literal: ``x_i`` -> ``2(i-1)``, ``not x_i`` -> ``2(i-1)+1``."""
    return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def sat_to_pds(f: CnfFormula) -> KPartInstance:
    """Literal/clause graph: part ``i`` holds ``x_i`` and its negation, the last part holds clauses."""
    n, m = f.num_vars, len(f.clauses)
    g = Graph(2 * n + m)
    for j, clause in enumerate(f.clauses):
        for lit in clause:
            if 2 * n + j not in g.adjacency[literal_vertex(lit)]:
                g.add_edge(literal_vertex(lit), 2 * n + j)
    parts = [[2 * i, 2 * i + 1] for i in range(n)] + [list(range(2 * n, 2 * n + m))]
    return KPartInstance(g, parts, n)


def brute_force_kpds(inst: KPartInstance) -> int | None:
    """Smallest set outside the target part that meets every other part and dominates the target."""
    g = inst.graph
    target = inst.parts[inst.target]
    others = [p for i, p in enumerate(inst.parts) if i != inst.target]
    pool = sorted(v for p in others for v in p)
    if len(pool) > KPDS_GUARD:
        raise GuardExceeded(f"{len(pool)} candidate vertices > {KPDS_GUARD}")
    if any(not p for p in others):
        return None
    tbit = {x: 1 << i for i, x in enumerate(target)}
    tset = set(target)
    for x in target:
        if g.adjacency[x] <= tset:
            return None
    full = (1 << len(target)) - 1
    cover = {v: sum(tbit[x] for x in g.adjacency[v] if x in tbit) for v in pool}
    part_of = {v: i for i, p in enumerate(others) for v in p}
    need_parts = (1 << len(others)) - 1
    for size in range(len(others), len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            acc = parts = 0
            for v in combo:
                acc |= cover[v]
                parts |= 1 << part_of[v]
            if acc == full and parts == need_parts:
                return size
    return None


def bipartite_view(inst: KPartInstance) -> BipartiteInstance:
    """Two-part covering view: everything outside the target covers the target part."""
    g = inst.graph
    tset = set(inst.parts[inst.target])
    ub = {v: {x for x in g.adjacency[v] if x in tset}
          for v in range(g.vertex_count) if v not in tset}
    return BipartiteInstance.from_adjacency(ub, sorted(tset))
