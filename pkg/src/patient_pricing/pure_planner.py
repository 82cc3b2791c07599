"""Dynamic program for the optimal non-increasing pure pricing.

For a non-increasing pricing a buyer who can afford it pays the price of
the last step in the patience window, so the revenue credited to step
``i`` only involves patience-``i`` buyers. Working backwards,

    r_i(p) = p * Pr[v >= p, w = i] + max{ r_{i+1}(p') : p' <= p }

with the inner max kept as a running prefix max over the sorted prices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .market import FiniteDistribution, MarketError, PurePricing, to_rational


class PurePlan(NamedTuple):
    pricing: PurePricing
    revenue: Fraction


@dataclass
class PureDpTable:
    prices: list
    w_max: int
    revenue: dict = field(default_factory=dict)  # (step, price) -> partial revenue
    successor: dict = field(default_factory=dict)  # (step, price) -> next price
    cells: int = 0


def price_grid(eps) -> list[Fraction]:
    """{0, eps, 2 eps, ...} capped at 1, with 1 always included."""
    eps = to_rational(eps)
    if not 0 < eps <= 1:
        raise MarketError(f"epsilon must lie in (0,1], got {eps}")
    grid = []
    k = 0
    while k * eps < 1:
        grid.append(k * eps)
        k += 1
    grid.append(Fraction(1))
    return grid


def pure_dp(dist: FiniteDistribution, prices: Sequence | None = None) -> PureDpTable:
    prices = sorted(set(dist.values() if prices is None else (to_rational(p) for p in prices)))
    if not prices:
        raise MarketError("empty price set")
    w_max = dist.w_max
    table = PureDpTable(prices, w_max)
    by_patience: dict[int, list] = {w: [] for w in range(1, w_max + 1)}
    for z, q in dist.support:
        by_patience[z.patience].append((z.value, q))

    nxt = {p: Fraction(0) for p in prices}
    for i in range(w_max, 0, -1):
        cur = {}
        best_price, best_val = None, None
        for p in prices:  # ascending: running max over p' <= p, ties keep the lower p'
            if best_val is None or nxt[p] > best_val:
                best_price, best_val = p, nxt[p]
            buyers = sum((q for v, q in by_patience[i] if v >= p), Fraction(0))
            cur[p] = p * buyers + best_val
            table.revenue[(i, p)] = cur[p]
            table.successor[(i, p)] = best_price
            table.cells += 1
        nxt = cur
    return table


def reconstruct_pure(table: PureDpTable) -> PurePlan:
    first = None
    for p in table.prices:
        if first is None or table.revenue[(1, p)] > table.revenue[(1, first)]:
            first = p
    out = [first]
    for i in range(1, table.w_max):
        out.append(table.successor[(i, out[-1])])
    return PurePlan(PurePricing(out), table.revenue[(1, first)])


def plan_pure(dist: FiniteDistribution, prices: Sequence | None = None) -> PurePlan:
    """Optimal pure pricing; prices default to the support values."""
    return reconstruct_pure(pure_dp(dist, prices))


def plan_pure_discretized(dist: FiniteDistribution, eps) -> PurePlan:
    return plan_pure(dist, price_grid(eps))
