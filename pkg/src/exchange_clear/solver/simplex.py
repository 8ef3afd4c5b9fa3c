"""Dense two-phase primal simplex for :class:`~exchange_clear.model.MipModel` relaxations.

Dantzig pricing, switching to Bland's rule after a long run of degenerate pivots.
Variable upper bounds are added as explicit rows only when no nonnegative ``<=``
row already implies them (true for every kidney formulation in this package),
so the working tableaus stay close to the model's own size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping

import numpy as np

from ..errors import NumericalFailure
from ..model import EQ, GE, LE, MipModel

FEAS_TOL = 1e-7
OPT_TOL = 1e-7
PIVOT_TOL = 1e-9
ZERO_TOL = 1e-12

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass
class LpOutcome:
    status: str
    value: float
    primal: dict[Hashable, float] = field(default_factory=dict)
    duals: dict[Hashable, float] = field(default_factory=dict)
    iterations: int = 0


class _Tableau:
    def __init__(self, T, basis, allowed):
        self.T = T
        self.basis = basis
        self.allowed = allowed
        self.iterations = 0

    def pivot(self, r, q):
        T = self.T
        prow = T[r] / T[r, q]
        T -= np.outer(T[:, q], prow)
        T[r] = prow
        rhs = T[:-1, -1]
        rhs[(rhs < 0) & (rhs > -FEAS_TOL)] = 0.0
        self.basis[r] = q

    def run(self, max_iter, bland_after):
        T, m = self.T, self.T.shape[0] - 1
        degenerate_run = 0
        bland = False
        while True:
            d = T[m, :-1]
            cand = (d > OPT_TOL) & self.allowed
            if not cand.any():
                return OPTIMAL
            if bland:
                q = int(np.flatnonzero(cand)[0])
            else:
                q = int(np.argmax(np.where(cand, d, -np.inf)))
            col = T[:m, q]
            pos = col > PIVOT_TOL
            if not pos.any():
                return UNBOUNDED
            ratios = np.full(m, np.inf)
            ratios[pos] = T[:m, -1][pos] / col[pos]
            theta = ratios.min()
            ties = np.flatnonzero(ratios <= theta + 1e-12 * (1.0 + abs(theta)))
            if bland:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                r = int(ties[np.argmax(col[ties])])
            self.pivot(r, q)
            self.iterations += 1
            degenerate_run = degenerate_run + 1 if theta <= ZERO_TOL else 0
            if degenerate_run > bland_after:
                bland = True
            if self.iterations > max_iter:
                raise NumericalFailure(f"simplex did not converge in {max_iter} pivots")


def _tableau_solve(c, A, senses, b):
    """max c.x s.t. A x (senses) b, x >= 0.  Returns (status, x, y, value, iterations)."""
    m, n = A.shape
    A = A.copy()
    b = b.copy()
    senses = list(senses)
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    for i in np.flatnonzero(flip):
        senses[i] = {LE: GE, GE: LE, EQ: EQ}[senses[i]]

    n_le = sum(s == LE for s in senses)
    n_ge = sum(s == GE for s in senses)
    n_art = m - n_le
    N = n + n_le + n_ge + n_art
    T = np.zeros((m + 1, N + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.int64)
    id_col = np.empty(m, dtype=np.int64)
    is_art = np.zeros(N, dtype=bool)
    s_col, e_col, a_col = n, n + n_le, n + n_le + n_ge
    for i, s in enumerate(senses):
        if s == LE:
            T[i, s_col] = 1.0
            basis[i] = id_col[i] = s_col
            s_col += 1
        else:
            if s == GE:
                T[i, e_col] = -1.0
                e_col += 1
            T[i, a_col] = 1.0
            is_art[a_col] = True
            basis[i] = id_col[i] = a_col
            a_col += 1

    tab = _Tableau(T, basis, ~is_art)
    max_iter = 50 * (m + N) + 1000
    bland_after = 10 * (m + N)

    if n_art:
        T[m, :-1] = np.where(is_art, -1.0, 0.0)
        art_rows = is_art[basis]
        T[m] += T[:m][art_rows].sum(axis=0)
        tab.run(max_iter, bland_after)
        if T[m, -1] > FEAS_TOL * (1.0 + b.max(initial=0.0)):
            return INFEASIBLE, None, None, None, tab.iterations
        for i in range(m):
            if is_art[basis[i]]:
                T[i, -1] = 0.0
                row = np.abs(T[i, :-1]) * ~is_art
                j = int(np.argmax(row))
                if row[j] > PIVOT_TOL:
                    tab.pivot(i, j)
                # otherwise the row is redundant; its artificial stays basic at zero

    cost = np.zeros(N)
    cost[:n] = c
    cB = cost[basis]
    T[m, :-1] = cost - cB @ T[:m, :-1]
    T[m, -1] = -(cB @ T[:m, -1])
    status = tab.run(max_iter, bland_after)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None, None, tab.iterations

    x = np.zeros(N)
    x[basis] = T[:m, -1]
    y = -T[m, id_col]
    y[flip] *= -1
    return OPTIMAL, x[:n], y, float(c @ x[:n]), tab.iterations


def solve_lp_arrays(c, A, senses, b, lower, upper):
    """LP over dense arrays with finite lower bounds.  Returns (status, x, y, value, iters)."""
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float).reshape(len(b), len(c))
    b = np.asarray(b, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    m, n = A.shape
    if np.any(upper < lower - FEAS_TOL):
        return INFEASIBLE, None, None, None, 0
    if not np.all(np.isfinite(lower)):
        raise ValueError("variables must have finite lower bounds")

    fixed = upper - lower <= ZERO_TOL
    x = lower.copy()
    b_shift = b - A @ lower
    const = float(c @ lower)
    active = np.flatnonzero(~fixed)
    span = upper[active] - lower[active]
    A_act = A[:, active]
    c_act = c[active]

    senses = list(senses)
    nonzero_rows = np.any(A_act != 0, axis=1) if len(active) else np.zeros(m, dtype=bool)
    for i in np.flatnonzero(~nonzero_rows):
        s, r = senses[i], b_shift[i]
        if (s == LE and r < -FEAS_TOL) or (s == GE and r > FEAS_TOL) or (s == EQ and abs(r) > FEAS_TOL):
            return INFEASIBLE, None, None, None, 0
    rows = np.flatnonzero(nonzero_rows)

    # Empty columns go straight to whichever bound the objective prefers.
    col_used = np.any(A_act[rows] != 0, axis=0) if len(rows) else np.zeros(len(active), dtype=bool)
    free_cols = np.flatnonzero(~col_used)
    ray = False
    for t in free_cols:
        if c_act[t] > 0:
            if not np.isfinite(span[t]):
                ray = True  # unbounded, provided the remaining rows are feasible
                continue
            x[active[t]] = upper[active[t]]
            const += c_act[t] * span[t]
    keep = np.flatnonzero(col_used)
    A_red = A_act[np.ix_(rows, keep)]
    b_red = b_shift[rows]
    s_red = [senses[i] for i in rows]
    span_red = span[keep]

    # Upper bounds that some nonnegative <= row already implies need no row of their own.
    implied = np.full(len(keep), np.inf)
    for r_idx, s in enumerate(s_red):
        row = A_red[r_idx]
        if s == LE and row.min(initial=0.0) >= 0:
            pos = row > 0
            implied[pos] = np.minimum(implied[pos], b_red[r_idx] / row[pos])
    need = np.flatnonzero(np.isfinite(span_red) & (implied > span_red + FEAS_TOL))
    if len(need):
        extra = np.zeros((len(need), len(keep)))
        extra[np.arange(len(need)), need] = 1.0
        A_red = np.vstack([A_red, extra])
        b_red = np.concatenate([b_red, span_red[need]])
        s_red = s_red + [LE] * len(need)

    y = np.zeros(m)
    if len(keep) == 0:
        if ray:
            return UNBOUNDED, None, None, None, 0
        return OPTIMAL, x, y, const, 0
    status, xk, yk, val, iters = _tableau_solve(c_act[keep], A_red, s_red, b_red)
    if status == OPTIMAL and ray:
        status = UNBOUNDED
    if status != OPTIMAL:
        return status, None, None, None, iters
    x[active[keep]] += xk
    y[rows] = yk[: len(rows)]
    return OPTIMAL, x, y, const + val, iters


def model_arrays(model: MipModel, bounds: Mapping | None = None):
    """Dense (c, A, senses, b, lower, upper) arrays for ``model``."""
    idx = model.index
    n, m = model.num_variables, model.num_constraints
    c = np.array([v.obj for v in model.variables], dtype=float)
    lower = np.array([v.lower for v in model.variables], dtype=float)
    upper = np.array([v.upper for v in model.variables], dtype=float)
    if bounds:
        for tag, (lo, hi) in bounds.items():
            t = idx[tag]
            lower[t], upper[t] = lo, hi
    A = np.zeros((m, n))
    b = np.empty(m)
    senses = []
    for r, con in enumerate(model.constraints):
        for tag, coef in con.terms:
            A[r, idx[tag]] += coef
        b[r] = con.rhs
        senses.append(con.sense)
    return c, A, senses, b, lower, upper


def solve_lp(model: MipModel, bounds: Mapping | None = None) -> LpOutcome:
    """Solve the LP relaxation of ``model`` (integrality flags are ignored).

    ``bounds`` optionally overrides ``(lower, upper)`` for some variable tags; the
    branch-and-bound search uses it to fix variables.
    """
    status, x, y, value, iters = solve_lp_arrays(*model_arrays(model, bounds))
    if status != OPTIMAL:
        return LpOutcome(status, float("nan"), iterations=iters)
    primal = {v.tag: float(x[t]) for t, v in enumerate(model.variables)}
    duals = {con.tag: float(y[r]) for r, con in enumerate(model.constraints)}
    return LpOutcome(OPTIMAL, float(value), primal, duals, iters)
