"""Brute-force oracles for small instances.

These deliberately avoid the planners' recursions: every candidate is
enumerated and scored with the plain revenue/utility definitions.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import NamedTuple

import numpy as np

from .buyer import conditional_next_prices
from .market import BuyerType, FiniteDistribution, MixedPricing, PurePricing, as_mixed, to_rational
from .revenue import revenue_mixed, revenue_pure


class BudgetExceeded(RuntimeError):
    """Enumeration larger than the oracle's hard budget."""


class OracleResult(NamedTuple):
    strategy: object
    revenue: Fraction


def brute_force_pure(dist: FiniteDistribution, prices=None, budget: int = 10**6) -> OracleResult:
    """Best pricing over every vector in ``prices^w_max`` (default: support values)."""
    prices = sorted(dist.values() if prices is None else {to_rational(p) for p in prices})
    n = len(prices) ** dist.w_max
    if n > budget:
        raise BudgetExceeded(f"{n} pricings exceed the budget {budget}")
    best = None
    for combo in itertools.product(prices, repeat=dist.w_max):
        p = PurePricing(combo)
        r = revenue_pure(p, dist)
        if best is None or r > best.revenue:
            best = OracleResult(p, r)
    return best


def _stopping_rules(node, children, depth_left):
    """Every deterministic stopping rule on the subtree below ``node``.

    A rule maps each reachable history to True (buy) or False (wait).
    ``depth_left`` is the number of steps at which buying is still allowed.
    """
    kids = children.get(node, [])
    if depth_left == 0 or not kids:
        yield {}
        return
    per_child = []
    for h in kids:
        options = [{h: True}]
        for sub in _stopping_rules(h, children, depth_left - 1):
            options.append({h: False, **sub})
        per_child.append(options)
    for combo in itertools.product(*per_child):
        rule = {}
        for part in combo:
            rule.update(part)
        yield rule


def brute_force_buyer(P, z: BuyerType, history_budget: int = 10**4, rule_budget: int = 10**6) -> Fraction:
    """Maximum expected utility over all deterministic history-dependent stopping rules."""
    P = as_mixed(P)
    nxt = conditional_next_prices(P)
    if len(nxt) > history_budget:
        raise BudgetExceeded(f"{len(nxt)} histories exceed the budget {history_budget}")
    children = {h: [h + (p,) for p in sorted(ps)] for h, ps in nxt.items()}
    w = min(z.patience, P.horizon)

    # count rules before enumerating
    def count(node, depth_left):
        kids = children.get(node, [])
        if depth_left == 0 or not kids:
            return 1
        total = 1
        for h in kids:
            total *= 1 + count(h, depth_left - 1)
        return total

    n_rules = count((), w)
    if n_rules > rule_budget:
        raise BudgetExceeded(f"{n_rules} stopping rules exceed the budget {rule_budget}")

    best = Fraction(0)
    for rule in _stopping_rules((), children, w):
        util = Fraction(0)
        for pricing, q in P.support:
            prices = pricing.prices
            for i in range(1, w + 1):
                if rule.get(prices[:i], False):
                    util += q * (z.value - prices[i - 1])
                    break
        best = max(best, util)
    return best


def _compositions(total, parts):
    """Positive integer vectors of length ``parts`` summing to ``total``."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        edges = (0,) + cuts + (total,)
        yield [b - a for a, b in zip(edges, edges[1:])]


def brute_force_mixed(
    dist: FiniteDistribution,
    alphabet,
    support_size_cap: int = 2,
    prob_grid: int = 6,
    budget: int = 10**6,
) -> OracleResult:
    """Best mixture of at most ``cap`` pricings with probabilities in multiples of 1/g."""
    alphabet = sorted({to_rational(a) for a in alphabet})
    if dist.w_max > 2 or len(alphabet) > 3 or support_size_cap > 3 or prob_grid > 24:
        raise BudgetExceeded("brute_force_mixed needs w_max <= 2, |alphabet| <= 3, cap <= 3, grid <= 24")
    pricings = [PurePricing(c) for c in itertools.product(alphabet, repeat=dist.w_max)]
    n = sum(comb(len(pricings), k) * comb(prob_grid - 1, k - 1) for k in range(1, support_size_cap + 1))
    if n > budget:
        raise BudgetExceeded(f"{n} mixtures exceed the budget {budget}")
    best = None
    for k in range(1, support_size_cap + 1):
        for chosen in itertools.combinations(pricings, k):
            for weights in _compositions(prob_grid, k):
                P = MixedPricing(
                    [(p, Fraction(wt, prob_grid)) for p, wt in zip(chosen, weights)], alphabet=alphabet
                )
                r = revenue_mixed(P, dist)
                if best is None or r > best.revenue:
                    best = OracleResult(P, r)
    return best


# -- random instances --------------------------------------------------------


def random_probabilities(rng: np.random.Generator, k: int, total: int = 12) -> list[Fraction]:
    """Exact random probability vector: a positive integer composition of ``total``."""
    cuts = sorted(rng.choice(np.arange(1, total), size=k - 1, replace=False).tolist()) if k > 1 else []
    edges = [0] + cuts + [total]
    return [Fraction(b - a, total) for a, b in zip(edges, edges[1:])]


def random_distribution(
    rng: np.random.Generator,
    max_w: int = 3,
    max_types: int = 4,
    max_values: int = 4,
    grid: int = 8,
) -> FiniteDistribution:
    """Small random distribution with values on {i/grid} and patience <= max_w."""
    w_max = int(rng.integers(1, max_w + 1))
    n_values = int(rng.integers(1, max_values + 1))
    values = sorted({Fraction(int(x), grid) for x in rng.choice(np.arange(0, grid + 1), size=n_values, replace=False)})
    all_types = [BuyerType(v, w) for v in values for w in range(1, w_max + 1)]
    k = int(rng.integers(1, min(max_types, len(all_types)) + 1))
    chosen = [all_types[j] for j in sorted(rng.choice(len(all_types), size=k, replace=False).tolist())]
    probs = random_probabilities(rng, k, total=max(12, k))
    return FiniteDistribution(w_max, list(zip(chosen, probs)))


def random_mixed_pricing(
    rng: np.random.Generator,
    horizon: int,
    max_support: int = 4,
    grid: int = 8,
) -> MixedPricing:
    alphabet = [Fraction(i, grid) for i in range(grid + 1)]
    k = int(rng.integers(1, max_support + 1))
    pricings = set()
    while len(pricings) < k:
        pricings.add(tuple(alphabet[int(j)] for j in rng.integers(0, grid + 1, size=horizon)))
    probs = random_probabilities(rng, k, total=max(12, k))
    return MixedPricing(list(zip(sorted(pricings), probs)))
