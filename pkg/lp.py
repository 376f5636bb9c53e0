"""
Dense two-phase simplex for standard-form problems

    minimize c^T x  subject to  A x = b,  x >= 0

sized for the small feasibility problems of vertex-redundancy removal.
"""

import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from errors import DimensionMismatchError, SolverError

logger = logging.getLogger(__name__)

# Configuration
FEASIBILITY_TOLERANCE = 1e-8
PIVOT_TOLERANCE = 1e-10
BLAND_FACTOR = 5      # switch to Bland's rule after BLAND_FACTOR * (rows + cols) pivots
BUDGET_FACTOR = 50    # give up after BUDGET_FACTOR * (rows + cols) pivots
WITNESS_TOLERANCE = 1e-7


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LpProblem:
    objective: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        objective = np.asarray(self.objective, dtype=float).reshape(-1)
        a_eq = np.asarray(self.a_eq, dtype=float)
        if a_eq.size == 0:
            a_eq = np.zeros((0, objective.size))
        a_eq = a_eq.reshape(-1, objective.size)
        b_eq = np.asarray(self.b_eq, dtype=float).reshape(-1)
        if a_eq.shape[0] != b_eq.size:
            raise DimensionMismatchError(
                f"{a_eq.shape[0]} constraint rows but {b_eq.size} right-hand sides"
            )
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "a_eq", a_eq)
        object.__setattr__(self, "b_eq", b_eq)


@dataclass
class LpResult:
    status: LpStatus
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    pivots: int = 0


@dataclass
class _Tableau:
    table: np.ndarray
    basis: List[int]
    pivots: int = 0
    bland: bool = False
    budget: int = 0
    bland_after: int = 0
    history: List[int] = field(default_factory=list)


def _pivot(T: np.ndarray, row: int, col: int):
    T[row, :] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r, :] -= T[r, col] * T[row, :]


def _entering(tab: _Tableau, n_cols: int) -> int:
    costs = tab.table[-1, :n_cols]
    if tab.bland:
        candidates = np.flatnonzero(costs < -PIVOT_TOLERANCE)
        return int(candidates[0]) if candidates.size else -1
    j = int(np.argmin(costs)) if n_cols else -1
    return j if j >= 0 and costs[j] < -PIVOT_TOLERANCE else -1


def _leaving(tab: _Tableau, col: int) -> int:
    T = tab.table
    column = T[:-1, col]
    rows = np.flatnonzero(column > PIVOT_TOLERANCE)
    if rows.size == 0:
        return -1
    ratios = T[rows, -1] / column[rows]
    best = ratios.min()
    ties = rows[ratios <= best + PIVOT_TOLERANCE]
    # Bland tie-break: smallest basic variable index
    return int(min(ties, key=lambda r: tab.basis[r]))


def _run(tab: _Tableau, n_cols: int) -> LpStatus:
    while True:
        col = _entering(tab, n_cols)
        if col < 0:
            return LpStatus.OPTIMAL
        row = _leaving(tab, col)
        if row < 0:
            return LpStatus.UNBOUNDED
        _pivot(tab.table, row, col)
        tab.basis[row] = col
        tab.pivots += 1
        if not tab.bland and tab.pivots >= tab.bland_after:
            logger.warning("simplex switching to Bland's rule", extra={"pivots": tab.pivots})
            tab.bland = True
        if tab.pivots > tab.budget:
            raise SolverError(f"Simplex exceeded its pivot budget of {tab.budget}")


def solve(prob: LpProblem) -> LpResult:
    A, b, c = prob.a_eq.copy(), prob.b_eq.copy(), prob.objective
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    size = m + n
    tab = _Tableau(
        table=np.zeros((m + 1, n + m + 1)),
        basis=list(range(n, n + m)),
        budget=BUDGET_FACTOR * size + 100,
        bland_after=BLAND_FACTOR * size,
    )
    T = tab.table
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    # Phase one: minimise the sum of artificials
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    _run(tab, n + m)
    if -T[-1, -1] > FEASIBILITY_TOLERANCE:
        return LpResult(LpStatus.INFEASIBLE, pivots=tab.pivots)

    # Drive remaining artificials out of the basis; drop redundant rows
    keep_rows = []
    for r in range(m):
        if tab.basis[r] >= n:
            candidates = np.flatnonzero(np.abs(T[r, :n]) > PIVOT_TOLERANCE)
            if candidates.size == 0:
                continue
            _pivot(T, r, int(candidates[0]))
            tab.basis[r] = int(candidates[0])
        keep_rows.append(r)

    table = np.vstack([T[keep_rows][:, list(range(n)) + [n + m]], np.zeros((1, n + 1))])
    basis = [tab.basis[r] for r in keep_rows]
    table[-1, :n] = c
    for r, var in enumerate(basis):
        if c[var] != 0.0:
            table[-1, :] -= c[var] * table[r, :]
    phase2 = _Tableau(
        table=table, basis=basis, pivots=tab.pivots, bland=tab.bland,
        budget=tab.budget, bland_after=tab.bland_after,
    )
    status = _run(phase2, n)
    if status is LpStatus.UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED, pivots=phase2.pivots)

    x = np.zeros(n)
    for r, var in enumerate(phase2.basis):
        x[var] = max(table[r, -1], 0.0)
    return LpResult(LpStatus.OPTIMAL, x=x, objective=float(c @ x), pivots=phase2.pivots)


def convex_combination(v: Sequence[float], points) -> Optional[np.ndarray]:
    """Weights beta >= 0, sum beta = 1 with beta @ points = v, or None."""
    v = np.asarray(v, dtype=float).reshape(-1)
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return None
    points = points.reshape(-1, v.size)
    if points.shape[1] != v.size:
        raise DimensionMismatchError("Point and candidate hull points differ in dimension")

    k = points.shape[0]
    a_eq = np.vstack([points.T, np.ones((1, k))])
    b_eq = np.concatenate([v, [1.0]])
    result = solve(LpProblem(np.zeros(k), a_eq, b_eq))
    if result.status is not LpStatus.OPTIMAL:
        return None
    beta = result.x
    if np.max(np.abs(beta @ points - v)) > WITNESS_TOLERANCE or abs(beta.sum() - 1.0) > WITNESS_TOLERANCE:
        return None
    return beta


def in_convex_hull(v: Sequence[float], points) -> bool:
    return convex_combination(v, points) is not None
