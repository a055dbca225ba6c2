"""Small dense LP solver and the covering LP builders used for bounds.

Every model has one column per UB node with bounds ``[0, 1]``; rows are either
``>=`` or ``=``.  :func:`solve_lp` is a two-phase primal simplex on the
bounded-variable form.  Pricing takes the largest reduced cost and falls back
to Bland's smallest-index rule after a run of degenerate pivots; all ties are
broken by index, so repeated calls on equal models return identical outcomes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graph import BipartiteInstance, ContractError

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-9
# degenerate pivots in a row before pricing falls back to Bland
STALL_LIMIT = 50

GE = ">="
EQ = "="


class LpError(RuntimeError):
    """Numerical breakdown inside the simplex; never a silent wrong status."""


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass
class LpModel:
    columns: list[int]
    objective: np.ndarray
    matrix: np.ndarray
    relations: list[str]
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.columns)
        self.objective = np.asarray(self.objective, dtype=float).reshape(n)
        self.matrix = np.asarray(self.matrix, dtype=float).reshape(len(self.relations), n)
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(len(self.relations))
        for rel in self.relations:
            if rel not in (GE, EQ):
                raise ContractError(f"unknown relation {rel!r}")

    @property
    def num_vars(self) -> int:
        return len(self.columns)

    @property
    def num_rows(self) -> int:
        return len(self.relations)

    def add_row(self, coeffs: np.ndarray, relation: str, rhs: float) -> None:
        self.matrix = np.vstack([self.matrix, np.asarray(coeffs, dtype=float).reshape(1, self.num_vars)])
        self.relations.append(relation)
        self.rhs = np.append(self.rhs, float(rhs))

    def violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation of ``x``."""
        worst = 0.0
        if self.num_vars:
            worst = max(worst, float(np.max(-x, initial=0.0)), float(np.max(x - 1.0, initial=0.0)))
        if self.num_rows:
            lhs = self.matrix @ x if self.num_vars else np.zeros(self.num_rows)
            gap = self.rhs - lhs
            for i, rel in enumerate(self.relations):
                worst = max(worst, gap[i] if rel == GE else abs(gap[i]))
        return worst

    def __eq__(self, other):
        if not isinstance(other, LpModel):
            return NotImplemented
        return (self.columns == other.columns and self.relations == other.relations
                and np.array_equal(self.objective, other.objective)
                and np.array_equal(self.matrix, other.matrix) and np.array_equal(self.rhs, other.rhs))


@dataclass
class LpOutcome:
    status: LpStatus
    value: float | None = None
    point: np.ndarray | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def build_relaxation(h: BipartiteInstance) -> LpModel:
    """Fractional covering LP: min sum x_v s.t. every UD node is covered at least once."""
    if h.uncoverable():
        raise ContractError(f"UD nodes without any UB neighbor: {h.uncoverable()}")
    columns = h.ub
    col_of = {v: j for j, v in enumerate(columns)}
    rows = h.ud
    matrix = np.zeros((len(rows), len(columns)))
    for i, d in enumerate(rows):
        for v in h.adj_ud[d]:
            matrix[i, col_of[v]] = 1.0
    return LpModel(columns, np.ones(len(columns)), matrix, [GE] * len(rows), np.ones(len(rows)))


def build_partition_lp(h: BipartiteInstance, fs: Sequence[Mapping[int, float]], j: int,
                       ceil_sol: int, prior_opts: Sequence[int]) -> LpModel:
    """The ``j``-th (1-based) LP of the cascade: minimise ``fs[j-1]`` over covers of size ``ceil_sol``.

    Earlier functions enter as cuts ``sum f_i x >= prior_opts[i]``.
    """
    if not 1 <= j <= len(fs):
        raise ContractError(f"index {j} outside 1..{len(fs)}")
    if len(prior_opts) != j - 1:
        raise ContractError(f"expected {j - 1} prior optima, got {len(prior_opts)}")
    if any(not np.isfinite(p) for p in prior_opts):
        raise ContractError("infinite prior optimum; the cascade should have stopped")
    model = build_relaxation(h)

    def weights(f: Mapping[int, float]) -> np.ndarray:
        return np.array([float(f.get(v, 0)) for v in model.columns])

    model.objective = weights(fs[j - 1])
    model.add_row(np.ones(model.num_vars), EQ, ceil_sol)
    for f, opt in zip(fs[: j - 1], prior_opts):
        model.add_row(weights(f), GE, opt)
    return model


def solve_lp(model: LpModel) -> LpOutcome:
    """Solve ``model``; returns an optimal vertex or reports infeasibility."""
    n, m = model.num_vars, model.num_rows
    c = model.objective
    if m == 0:
        x = (c < 0).astype(float)
        return LpOutcome(LpStatus.OPTIMAL, float(c @ x), x)
    return _Simplex(model).run()


class _Simplex:
    """Tableau state for one solve.

    Structural columns start nonbasic at their upper bound 1.  A ``>=`` row
    already satisfied there starts with its surplus column basic; every
    other row gets an artificial column, signed so its starting value is
    non-negative.  Column layout: structural ``[0, n)``, surplus, artificial.
    """

    def __init__(self, model: LpModel):
        self.model = model
        n, m = model.num_vars, model.num_rows
        a_model = model.matrix
        b = model.rhs.astype(float).copy()
        activity = a_model.sum(axis=1)
        ge_rows = [i for i, rel in enumerate(model.relations) if rel == GE]
        art_rows = [i for i, rel in enumerate(model.relations)
                    if rel == EQ or activity[i] < b[i] - FEAS_TOL]
        n_sur, n_art = len(ge_rows), len(art_rows)
        self.n = n
        self.art0 = n + n_sur
        self.total = n + n_sur + n_art
        a = np.zeros((m, self.total))
        a[:, :n] = a_model
        basis = [-1] * m
        for k, i in enumerate(ge_rows):
            a[i, n + k] = -1.0
            basis[i] = n + k
        for k, i in enumerate(art_rows):
            if activity[i] > b[i]:
                a[i] *= -1.0
                b[i] *= -1.0
            a[i, self.art0 + k] = 1.0
            basis[i] = self.art0 + k
        self.a_full = a.copy()
        self.b_full = b.copy()
        # every basis column is a signed unit vector in its row
        signs = a[np.arange(m), basis]
        self.tab = a / signs[:, None]
        self.hi = np.full(self.total, np.inf)
        self.hi[:n] = 1.0
        self.at_upper = np.zeros(self.total, dtype=bool)
        self.at_upper[:n] = True
        self.basis = basis
        self.is_basic = np.zeros(self.total, dtype=bool)
        self.is_basic[basis] = True
        self.allowed = np.ones(self.total, dtype=bool)
        self._refresh()

    def run(self) -> LpOutcome:
        cost1 = np.zeros(self.total)
        cost1[self.art0:] = 1.0
        self._optimise(cost1)
        self._refresh()
        infeas = float(sum(self.xb[i] for i, j in enumerate(self.basis) if j >= self.art0))
        if infeas > FEAS_TOL:
            return LpOutcome(LpStatus.INFEASIBLE)
        # artificials are pinned at zero for phase two
        self.hi[self.art0:] = 0.0
        self.allowed[self.art0:] = False
        cost2 = np.zeros(self.total)
        cost2[: self.n] = self.model.objective
        self._optimise(cost2)
        self._refresh()
        x = self._structural()
        if self.model.violation(x) > FEAS_TOL:
            raise LpError(f"final point violates constraints by {self.model.violation(x):.3g}")
        x = np.clip(x, 0.0, 1.0)
        return LpOutcome(LpStatus.OPTIMAL, float(self.model.objective @ x), x)

    def _structural(self) -> np.ndarray:
        x = np.where(self.at_upper[: self.n], 1.0, 0.0)
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.xb[i]
        return x

    def _refresh(self) -> None:
        """Recompute basic values from the original columns to shed pivot drift."""
        basis_mat = self.a_full[:, self.basis]
        upper = np.where(self.at_upper & ~self.is_basic, self.hi, 0.0)
        upper[~np.isfinite(upper)] = 0.0
        rhs = self.b_full - self.a_full @ upper
        try:
            self.xb = np.linalg.solve(basis_mat, rhs)
        except np.linalg.LinAlgError as exc:
            raise LpError("singular basis") from exc

    def _optimise(self, cost: np.ndarray) -> None:
        tab, xb, basis = self.tab, self.xb, self.basis
        hi, at_upper = self.hi, self.at_upper
        m = tab.shape[0]
        d = cost - cost[basis] @ tab
        max_iter = 50 * (self.total + m) + 1000
        stalled = 0
        for _ in range(max_iter):
            candidates = ~self.is_basic & self.allowed & (
                (~at_upper & (d < -FEAS_TOL)) | (at_upper & (d > FEAS_TOL)))
            idx = np.flatnonzero(candidates)
            if idx.size == 0:
                return
            if stalled < STALL_LIMIT:
                # steepest reduced cost; argmax keeps the smallest index on ties
                j = int(idx[np.argmax(np.abs(d[idx]))])
            else:
                # Bland's rule cannot cycle
                j = int(idx[0])
            increasing = not at_upper[j]
            col = tab[:, j]
            delta = -col if increasing else col
            hb = hi[basis]
            ratios = np.full(m, np.inf)
            down = delta < -PIVOT_TOL
            up = (delta > PIVOT_TOL) & np.isfinite(hb)
            ratios[down] = np.maximum(xb[down], 0.0) / -delta[down]
            ratios[up] = np.maximum(hb[up] - xb[up], 0.0) / delta[up]
            t_min = float(ratios.min()) if m else np.inf
            if hi[j] <= t_min:
                # bound flip: the entering variable crosses its whole range
                xb += hi[j] * delta
                at_upper[j] = not at_upper[j]
                continue
            if not np.isfinite(t_min):
                raise LpError("unbounded direction in a bounded model")
            ties = np.flatnonzero(ratios <= t_min + PIVOT_TOL)
            leave = int(min(ties, key=lambda i: basis[i]))
            t_best = ratios[leave]
            stalled = stalled + 1 if t_best <= PIVOT_TOL else 0
            xb += t_best * delta
            to_upper = delta[leave] > 0
            enter_val = t_best if increasing else hi[j] - t_best
            old = basis[leave]
            pivot = tab[leave, j]
            if abs(pivot) <= PIVOT_TOL:
                raise LpError("pivot below threshold")
            tab[leave] /= pivot
            factors = tab[:, j].copy()
            factors[leave] = 0.0
            tab -= np.outer(factors, tab[leave])
            d -= d[j] * tab[leave]
            basis[leave] = j
            self.is_basic[j] = True
            self.is_basic[old] = False
            at_upper[old] = bool(to_upper)
            at_upper[j] = False
            xb[leave] = enter_val
        raise LpError("iteration limit reached")
