"""Strategic buyer best responses.

Against a mixed strategy the buyer faces an optimal stopping problem over
the tree of realizable price prefixes. The best response is a threshold
rule: buy at the first step ``i <= w`` whose price is at most
``v - u^{i+1}(p_1..p_i)``, where ``u^{i+1}`` is the optimal continuation
utility. Exact indifference resolves to buying.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .market import (
    NO_PURCHASE,
    BuyerType,
    MarketError,
    MixedPricing,
    PurchaseOutcome,
    PurePricing,
    as_mixed,
)

ZERO = Fraction(0)


def pure_best_response(p: PurePricing, z: BuyerType) -> PurchaseOutcome:
    if z.patience > len(p):
        raise MarketError(f"patience {z.patience} exceeds pricing length {len(p)}")
    v, w = z.value, z.patience
    # best utility obtainable strictly after step i, for i = w, w-1, ..., 1
    future = [ZERO] * (w + 1)
    for i in range(w - 1, 0, -1):
        future[i] = max(future[i + 1], v - p[i])
    for i in range(1, w + 1):
        if v - p[i - 1] >= future[i]:
            return PurchaseOutcome(True, i, p[i - 1])
    return NO_PURCHASE


def conditional_next_prices(P: MixedPricing) -> dict[tuple, dict[Fraction, Fraction]]:
    """Map every realizable prefix to the (unnormalized) weight of each next price."""
    out: dict[tuple, dict[Fraction, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    for pricing, q in P.support:
        prices = pricing.prices
        for i in range(len(prices)):
            out[prices[:i]][prices[i]] += q
    return {h: dict(nxt) for h, nxt in out.items()}


def partial_utilities(P, z: BuyerType) -> dict[tuple, Fraction]:
    """Optimal continuation utility keyed by realized prefix.

    ``result[h]`` with ``len(h) == i - 1`` is the utility from step ``i``
    onwards after observing ``h`` without having bought. Full-length
    prefixes map to 0.
    """
    P = as_mixed(P)
    horizon = P.horizon
    if z.patience > horizon:
        raise MarketError(f"patience {z.patience} exceeds pricing length {horizon}")
    nxt = conditional_next_prices(P)
    v, w = z.value, z.patience
    u: dict[tuple, Fraction] = {}

    def solve(h: tuple) -> Fraction:
        step = len(h) + 1
        if step > w:
            val = ZERO
        else:
            weights = nxt[h]
            total = sum(weights.values())
            val = sum(q * max(v - p, solve(h + (p,))) for p, q in weights.items()) / total
        u[h] = val
        return val

    solve(())
    # prefixes beyond the patience window are still realizable histories
    for h in nxt:
        u.setdefault(h, ZERO)
    for pricing, _ in P.support:
        u.setdefault(pricing.prices, ZERO)
    return u


@dataclass(frozen=True)
class ThresholdPolicy:
    buyer: BuyerType
    thresholds: dict  # prefix (length 1..horizon) -> Fraction

    def threshold(self, prefix) -> Fraction:
        prefix = tuple(prefix)
        if prefix not in self.thresholds:
            raise MarketError(f"history {prefix!r} is not realizable")
        return self.thresholds[prefix]

    def act(self, realized) -> PurchaseOutcome:
        prices = tuple(realized)
        for i in range(1, min(self.buyer.patience, len(prices)) + 1):
            if prices[i - 1] <= self.threshold(prices[:i]):
                return PurchaseOutcome(True, i, prices[i - 1])
        return NO_PURCHASE


def best_response_thresholds(P, z: BuyerType) -> ThresholdPolicy:
    P = as_mixed(P)
    u = partial_utilities(P, z)
    thresholds = {h: z.value - uh for h, uh in u.items() if len(h) >= 1}
    return ThresholdPolicy(z, thresholds)


def simulate_purchase(P, z: BuyerType, realized, policy: ThresholdPolicy | None = None) -> PurchaseOutcome:
    P = as_mixed(P)
    realized = realized if isinstance(realized, PurePricing) else PurePricing(realized)
    if realized not in dict(P.support):
        raise MarketError(f"realized pricing {realized!r} is not in the support")
    if policy is None:
        policy = best_response_thresholds(P, z)
    return policy.act(realized.prices)


def expected_utility(P, z: BuyerType) -> Fraction:
    """Best-response expected utility of ``z`` against ``P``."""
    return partial_utilities(P, z)[()]
