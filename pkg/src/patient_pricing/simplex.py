"""Two-phase tableau simplex over exact rationals (Bland's rule).

Meant for the tiny LPs of the mixed planner (a handful of variables and
rows), where exactness matters more than speed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    x: list | None = None
    value: Fraction | None = None


def _pivot(T, basis, row, col):
    piv = T[row][col]
    T[row] = [a / piv for a in T[row]]
    for k, r in enumerate(T):
        if k != row and r[col] != 0:
            f = r[col]
            T[k] = [a - f * b for a, b in zip(r, T[row])]
    basis[row] = col


def _run(T, basis, allowed):
    """Maximize the objective stored in the last row (as reduced costs, negated)."""
    obj = T[-1]
    while True:
        # entering: lowest index with negative reduced cost
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best = None
        for i in range(len(T) - 1):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        _pivot(T, basis, best[1], col)
        obj = T[-1]


def linprog_max(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), A_ge=(), b_ge=()) -> LpResult:
    """maximize c.x  s.t.  A_ub x <= b_ub, A_eq x = b_eq, A_ge x >= b_ge, x >= 0."""
    c = [Fraction(v) for v in c]
    n = len(c)
    rows = []  # (coeffs, rhs, sense) with sense in {'<=', '=', '>='}
    for A, b, sense in ((A_ub, b_ub, "<="), (A_eq, b_eq, "="), (A_ge, b_ge, ">=")):
        for a, rhs in zip(A, b):
            a = [Fraction(v) for v in a]
            rhs = Fraction(rhs)
            row_sense = sense
            if rhs < 0:
                a = [-v for v in a]
                rhs = -rhs
                row_sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
            rows.append((a, rhs, row_sense))
    m = len(rows)
    n_slack = sum(1 for _, _, s in rows if s != "=")
    n_art = sum(1 for _, _, s in rows if s != "<=")
    width = n + n_slack + n_art
    T = []
    basis = []
    slack_at = n
    art_at = n + n_slack
    artificials = []
    for a, rhs, sense in rows:
        row = a + [Fraction(0)] * (n_slack + n_art) + [rhs]
        if sense == "<=":
            row[slack_at] = Fraction(1)
            basis.append(slack_at)
            slack_at += 1
        else:
            if sense == ">=":
                row[slack_at] = Fraction(-1)
                slack_at += 1
            row[art_at] = Fraction(1)
            basis.append(art_at)
            artificials.append(art_at)
            art_at += 1
        T.append(row)

    # phase 1: maximize -sum(artificials)
    obj = [Fraction(0)] * (width + 1)
    for j in artificials:
        obj[j] = Fraction(1)
    for i, bj in enumerate(basis):
        if bj in artificials:
            obj = [o - r for o, r in zip(obj, T[i])]
    T.append(obj)
    if artificials:
        _run(T, basis, range(width))
        if T[-1][-1] != 0:
            return LpResult(INFEASIBLE)
        art = set(artificials)
        for i in range(m - 1, -1, -1):
            if basis[i] in art:
                col = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
                if col is None:
                    del T[i]
                    del basis[i]
                else:
                    _pivot(T, basis, i, col)
    allowed = range(n + n_slack)

    # phase 2
    obj = [-v for v in c] + [Fraction(0)] * (width - n + 1)
    for i, bj in enumerate(basis):
        if obj[bj] != 0:
            f = obj[bj]
            obj = [o - f * r for o, r in zip(obj, T[i])]
    T[-1] = obj
    status = _run(T, basis, allowed)
    if status != OPTIMAL:
        return LpResult(status)
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        if bj < n:
            x[bj] = T[i][-1]
    return LpResult(OPTIMAL, x, sum((ci * xi for ci, xi in zip(c, x)), Fraction(0)))
