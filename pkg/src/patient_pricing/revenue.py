"""Exact expected revenue of selling strategies."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .buyer import best_response_thresholds, pure_best_response
from .market import (
    BuyerType,
    FiniteDistribution,
    MarketError,
    MixedPricing,
    PurePricing,
    as_mixed,
    check_horizon,
    empirical_distribution,
)


def revenue_pure(p: PurePricing, dist: FiniteDistribution) -> Fraction:
    if not isinstance(p, PurePricing):
        p = PurePricing(p)
    check_horizon(len(p), dist)
    return sum((q * pure_best_response(p, z).revenue for z, q in dist.support), Fraction(0))


def revenue_against_type(P: MixedPricing, z: BuyerType) -> Fraction:
    """Expected revenue from a single buyer type."""
    P = as_mixed(P)
    policy = best_response_thresholds(P, z)
    return sum((q * policy.act(pricing.prices).revenue for pricing, q in P.support), Fraction(0))


def revenue_mixed(P, dist: FiniteDistribution) -> Fraction:
    P = as_mixed(P)
    check_horizon(P.horizon, dist)
    return sum((q * revenue_against_type(P, z) for z, q in dist.support), Fraction(0))


def revenue(strategy, dist: FiniteDistribution) -> Fraction:
    if isinstance(strategy, MixedPricing):
        return revenue_mixed(strategy, dist)
    return revenue_pure(strategy, dist)


def empirical_revenue(strategy, sample: Sequence[BuyerType]) -> Fraction:
    if not sample:
        raise MarketError("empty sample")
    P = as_mixed(strategy)
    per_type: dict[BuyerType, Fraction] = {}
    total = Fraction(0)
    for z in sample:
        if z not in per_type:
            if z.patience > P.horizon:
                raise MarketError(f"patience {z.patience} exceeds pricing length {P.horizon}")
            per_type[z] = revenue_against_type(P, z)
        total += per_type[z]
    return total / len(sample)


def best_fixed_price(dist: FiniteDistribution) -> tuple[Fraction, Fraction]:
    """Best constant pricing over the support values; ties go to the lower price."""
    best = None
    for q in dist.values():
        r = revenue_pure(PurePricing([q] * dist.w_max), dist)
        if best is None or r > best[1]:
            best = (q, r)
    return best


__all__ = [
    "revenue_pure",
    "revenue_mixed",
    "revenue",
    "revenue_against_type",
    "empirical_revenue",
    "best_fixed_price",
    "empirical_distribution",
]
