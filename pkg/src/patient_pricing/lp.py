"""Per-transition linear program of the mixed planner.

Variables are the probabilities ``alpha[p]`` of the next-step price. The
objective is the expected continuation revenue. Two kinds of incentive
rows pin down which buyers survive the current step:

* stay rows: the highest surviving value of a patience must strictly
  prefer waiting, ``sum alpha * u > v - p_i`` (buyers buy on indifference,
  so equality would make them buy);
* buy rows: the lowest departing value must weakly prefer buying now,
  ``sum alpha * u <= v - p_i``.

Strict rows are handled exactly: the closed LP is solved first; if no
optimal point keeps every stay row slack, the best point with slack at
least ``margin`` is returned instead (``margin`` is the smaller of
``STRICT_MARGIN`` and half the largest attainable slack).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .simplex import OPTIMAL, linprog_max

STRICT_MARGIN = Fraction(1, 10**9)


@dataclass(frozen=True)
class LpInstance:
    prices: tuple
    objective: tuple
    stay_rows: tuple = ()  # (coeffs, rhs): sum alpha*coeffs > rhs
    buy_rows: tuple = ()  # (coeffs, rhs): sum alpha*coeffs <= rhs


@dataclass
class LpSolution:
    feasible: bool
    value: Fraction
    alpha: dict = field(default_factory=dict)
    margin: Fraction | None = None  # set when the supremum was not attainable


def _dot(a, x):
    return sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))


def _point_mass_argmax(inst: LpInstance) -> LpSolution:
    k = max(range(len(inst.prices)), key=lambda j: (inst.objective[j], -j))
    return LpSolution(True, inst.objective[k], {inst.prices[k]: Fraction(1)})


def _as_alpha(inst, x):
    return {p: a for p, a in zip(inst.prices, x) if a != 0}


def solve_lp(inst: LpInstance) -> LpSolution:
    n = len(inst.prices)
    if not inst.stay_rows and not inst.buy_rows:
        return _point_mass_argmax(inst)
    ones = [[Fraction(1)] * n]
    A_ub = [list(c) for c, _ in inst.buy_rows]
    b_ub = [r for _, r in inst.buy_rows]
    A_ge = [list(c) for c, _ in inst.stay_rows]
    b_ge = [r for _, r in inst.stay_rows]

    closed = linprog_max(inst.objective, A_ub, b_ub, ones, [1], A_ge, b_ge)
    if closed.status != OPTIMAL:
        return LpSolution(False, Fraction(0), {inst.prices[0]: Fraction(1)})
    x = closed.x
    if all(_dot(c, x) > r for c, r in inst.stay_rows):
        return LpSolution(True, closed.value, _as_alpha(inst, x))

    # extra variable t (last column): the common slack of all stay rows
    def with_t(rows, t_coef):
        return [list(c) + [t_coef] for c in rows]

    obj_row = list(inst.objective) + [Fraction(0)]
    t_only = [Fraction(0)] * n + [Fraction(1)]
    ones_t = [[Fraction(1)] * n + [Fraction(0)]]
    stay_t = with_t([c for c, _ in inst.stay_rows], Fraction(-1))
    buy_t = with_t([c for c, _ in inst.buy_rows], Fraction(0))

    # is there an optimal point with every stay row slack?
    face = linprog_max(
        t_only,
        buy_t + [t_only],
        b_ub + [Fraction(1)],
        ones_t,
        [1],
        stay_t + [obj_row],
        b_ge + [closed.value],
    )
    if face.status == OPTIMAL and face.value > 0:
        return LpSolution(True, closed.value, _as_alpha(inst, face.x[:n]))

    widest = linprog_max(t_only, buy_t + [t_only], b_ub + [Fraction(1)], ones_t, [1], stay_t, b_ge)
    if widest.status != OPTIMAL or widest.value <= 0:
        return LpSolution(False, Fraction(0), {inst.prices[0]: Fraction(1)})
    margin = min(STRICT_MARGIN, widest.value / 2)
    inner = linprog_max(inst.objective, A_ub, b_ub, ones, [1], A_ge, [r + margin for r in b_ge])
    assert inner.status == OPTIMAL
    return LpSolution(True, inner.value, _as_alpha(inst, inner.x), margin)
