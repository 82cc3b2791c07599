"""Optimal mixed pricing over a finite price alphabet.

Backward dynamic program over states ``(step, price, buyer vector)``. A
buyer vector holds, for every patience ``w``, the highest value still in
the market (``None`` when no buyer of that patience is left); by buyer
monotonicity this describes the surviving set exactly. For each state the
planner tries every successor vector below the current one, solves the
incentive LP for the next-step price distribution, and keeps the best.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .lp import LpInstance, solve_lp
from .market import BuyerType, FiniteDistribution, MarketError, MixedPricing, to_rational
from .pure_planner import price_grid
from .revenue import revenue_mixed

DEFAULT_MAX_W = 4
DEFAULT_MAX_VALUES = 4


class GuardExceeded(RuntimeError):
    """Instance too large for the exponential mixed planner."""


class MixedPlan(NamedTuple):
    strategy: MixedPricing
    revenue: Fraction


@dataclass
class MixedDpState:
    dist: FiniteDistribution
    alphabet: tuple
    revenue: dict = field(default_factory=dict)  # (step, price, vector) -> r
    utility: dict = field(default_factory=dict)  # (step, price, vector) -> {type: u}
    next_alpha: dict = field(default_factory=dict)  # (step, price, vector) -> {price: prob}
    next_vector: dict = field(default_factory=dict)  # (step, price, vector) -> vector
    margins: list = field(default_factory=list)
    lp_calls: int = 0
    states: int = 0
    initial_vector: tuple = ()
    first_price: Fraction | None = None
    dp_revenue: Fraction | None = None
    survivors: dict = field(default_factory=dict)  # realized prefix (len i-1) -> vector at step i


@dataclass
class MixedSolution:
    strategy: MixedPricing
    revenue: Fraction
    dp: MixedDpState


def _le(a, b) -> bool:
    """a <= b with None below every value."""
    if a is None:
        return True
    return b is not None and a <= b


def _vectors_at(step, options):
    """All buyer vectors at ``step``: entries below ``step`` are None."""
    per_w = [[None] if w < step else [None] + opts for w, opts in enumerate(options, start=1)]
    return itertools.product(*per_w)


def _successors(step, b, options):
    per_w = []
    for w, opts in enumerate(options, start=1):
        if w <= step:
            per_w.append([None])
        else:
            per_w.append([None] + [x for x in opts if _le(x, b[w - 1])])
    return itertools.product(*per_w)


def _validate(dist, alphabet, max_w, max_values):
    alphabet = tuple(sorted({to_rational(a) for a in alphabet}))
    if not alphabet:
        raise MarketError("empty price alphabet")
    for a in alphabet:
        if not 0 <= a <= 1:
            raise MarketError(f"alphabet price {a} outside [0,1]")
    if dist.w_max > max_w:
        raise GuardExceeded(f"w_max={dist.w_max} exceeds the guard {max_w}")
    if len(dist.values()) > max_values:
        raise GuardExceeded(f"{len(dist.values())} distinct values exceed the guard {max_values}")
    return alphabet


def mixed_dp(
    dist: FiniteDistribution,
    alphabet: Sequence,
    max_w: int = DEFAULT_MAX_W,
    max_values: int = DEFAULT_MAX_VALUES,
) -> MixedDpState:
    prices = _validate(dist, alphabet, max_w, max_values)
    W = dist.w_max
    options = [dist.values_by_patience()[w] for w in range(1, W + 1)]
    types = dist.types
    prob = dict(dist.support)
    st = MixedDpState(dist, prices)
    lp_cache: dict = {}

    def mass(w, lo, hi):
        """Pr[patience w, lo < v <= hi] with lo=None meaning no lower bound."""
        return sum(
            (prob[z] for z in types if z.patience == w and not _le(z.value, lo) and _le(z.value, hi)),
            Fraction(0),
        )

    for i in range(W, 0, -1):
        for b in _vectors_at(i, options):
            for p in prices:
                key = (i, p, b)
                st.states += 1
                if i == W:
                    s_hat, alpha, b_next = Fraction(0), {}, (None,) * W
                else:
                    best = None
                    for cand in _successors(i, b, options):
                        stay, buy, sig = [], [], []
                        cont = [(i + 1, q, cand) for q in prices]
                        for w in range(i + 1, W + 1):
                            top = cand[w - 1]
                            if top is not None:
                                z = BuyerType(top, w)
                                stay.append((tuple(st.utility[c][z] for c in cont), top - p))
                            above = [x for x in options[w - 1] if not _le(x, top) and _le(x, b[w - 1])]
                            sig.append(above[0] if above else None)
                            if above:
                                z = BuyerType(above[0], w)
                                buy.append((tuple(st.utility[c][z] for c in cont), above[0] - p))
                        ck = (i, p, cand, tuple(sig))
                        sol = lp_cache.get(ck)
                        if sol is None:
                            inst = LpInstance(prices, tuple(st.revenue[c] for c in cont), tuple(stay), tuple(buy))
                            sol = solve_lp(inst)
                            st.lp_calls += 1
                            lp_cache[ck] = sol
                        if not sol.feasible:
                            continue
                        # buyers leaving now pay p_i; rank by immediate plus future revenue
                        total = p * sum((mass(w, cand[w - 1], b[w - 1]) for w in range(i + 1, W + 1)), Fraction(0))
                        total += sol.value
                        if best is None or total > best[0]:
                            best = (total, sol, cand)
                    if best is None:
                        raise RuntimeError(f"no feasible successor for state {key}")
                    _, sol, b_next = best
                    s_hat, alpha = sol.value, sol.alpha
                    if sol.margin is not None:
                        st.margins.append((key, sol.margin))
                buyers_now = sum(
                    (prob[z] for z in types if z.patience == i and p <= z.value and _le(z.value, b[i - 1])),
                    Fraction(0),
                )
                for w in range(i + 1, W + 1):
                    buyers_now += mass(w, b_next[w - 1], b[w - 1])
                st.revenue[key] = p * buyers_now + s_hat
                util = {}
                for z in types:
                    if z.patience < i:
                        continue
                    if z.patience == i:
                        cont_u = Fraction(0)
                    else:
                        cont_u = sum(
                            (a * st.utility[(i + 1, q, b_next)][z] for q, a in alpha.items()), Fraction(0)
                        )
                    util[z] = max(z.value - p, cont_u)
                st.utility[key] = util
                st.next_alpha[key] = alpha
                st.next_vector[key] = b_next

    bound = len(prices) * (len(dist.values()) + 1) ** W * W
    assert st.states <= bound, (st.states, bound)

    st.initial_vector = tuple(opts[-1] if opts else None for opts in options)
    first = None
    for p in prices:
        if first is None or st.revenue[(1, p, st.initial_vector)] > st.revenue[(1, first, st.initial_vector)]:
            first = p
    st.first_price = first
    st.dp_revenue = st.revenue[(1, first, st.initial_vector)]
    return st


def reconstruct_mixed(st: MixedDpState) -> MixedPricing:
    """Expand the chain of price distributions along positive-probability paths."""
    W = st.dist.w_max
    support = []
    st.survivors = {(): st.initial_vector}

    def walk(prefix, b, q):
        i = len(prefix)
        p_i = prefix[-1]
        if i == W:
            support.append((prefix, q))
            return
        key = (i, p_i, b)
        b_next = st.next_vector[key]
        st.survivors[prefix] = b_next
        for p, a in sorted(st.next_alpha[key].items()):
            walk(prefix + (p,), b_next, q * a)

    walk((st.first_price,), st.initial_vector, Fraction(1))
    return MixedPricing(support, alphabet=st.alphabet)


def solve_mixed(
    dist: FiniteDistribution,
    alphabet: Sequence,
    max_w: int = DEFAULT_MAX_W,
    max_values: int = DEFAULT_MAX_VALUES,
) -> MixedSolution:
    st = mixed_dp(dist, alphabet, max_w, max_values)
    strategy = reconstruct_mixed(st)
    exact = revenue_mixed(strategy, dist)
    if exact != st.dp_revenue:
        raise RuntimeError(f"planner revenue {st.dp_revenue} disagrees with simulated revenue {exact}")
    return MixedSolution(strategy, exact, st)


def plan_mixed(dist: FiniteDistribution, alphabet: Sequence, **guards) -> MixedPlan:
    sol = solve_mixed(dist, alphabet, **guards)
    return MixedPlan(sol.strategy, sol.revenue)


def plan_mixed_discretized(dist: FiniteDistribution, eps, **guards) -> MixedPlan:
    return plan_mixed(dist, price_grid(eps), **guards)
