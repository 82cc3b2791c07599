from fractions import Fraction as F

import numpy as np
import pytest

from patient_pricing.buyer import best_response_thresholds, conditional_next_prices, partial_utilities
from patient_pricing.market import FiniteDistribution, MarketError, PurePricing, d1, d2
from patient_pricing.mixed_planner import (
    GuardExceeded,
    plan_mixed,
    plan_mixed_discretized,
    solve_mixed,
)
from patient_pricing.oracle import brute_force_mixed, random_distribution
from patient_pricing.pure_planner import plan_pure
from patient_pricing.revenue import best_fixed_price, revenue_mixed

T = F(1, 3)
D2_ALPHABET = [T, 2 * T, F(1)]


def random_instances(n, seed, max_w=3, max_values=3):
    rng = np.random.default_rng(seed)
    return [random_distribution(rng, max_w=max_w, max_types=4, max_values=max_values) for _ in range(n)]


def survivor_vector(dist, P, prefix):
    """Per-patience highest value still unsold after ``prefix`` (None if none)."""
    step = len(prefix) + 1
    top = {}
    for z in dist.types:
        if z.patience < step:
            continue
        pol = best_response_thresholds(P, z)
        bought = any(prefix[k] <= pol.threshold(prefix[: k + 1]) for k in range(len(prefix)))
        if not bought:
            top[z.patience] = max(top.get(z.patience, z.value), z.value)
    vec = tuple(top.get(w) for w in range(1, dist.w_max + 1))
    # downward closed: every lower type of a surviving patience also survives
    for z in dist.types:
        if z.patience >= step and top.get(z.patience) is not None and z.value <= top[z.patience]:
            pol = best_response_thresholds(P, z)
            assert not any(prefix[k] <= pol.threshold(prefix[: k + 1]) for k in range(len(prefix)))
    return vec


def check_solution(dist, sol):
    P, st = sol.strategy, sol.dp
    assert sol.revenue == revenue_mixed(P, dist) == st.dp_revenue
    assert sum(q for _, q in P.support) == 1
    assert all(set(p) <= set(st.alphabet) for p, _ in P.support)
    # recorded buyer vectors match a replay of the buyers' thresholds
    for prefix, vec in st.survivors.items():
        assert survivor_vector(dist, P, prefix) == vec, prefix
    # DP utilities agree with the buyer module along realized histories
    for z in dist.types:
        u = partial_utilities(P, z)
        for pricing, _ in P.support:
            for i in range(1, dist.w_max + 1):
                if z.patience < i:
                    continue
                h = pricing.prices[:i]
                b = st.survivors[h[:-1]]
                assert st.utility[(i, h[-1], b)][z] == max(z.value - h[-1], u[h])
        # time monotonicity on planner outputs
        nxt = conditional_next_prices(P)
        for h, ws in nxt.items():
            tot = sum(ws.values())
            assert sum(q * u[h + (p,)] for p, q in ws.items()) / tot <= u[h]
    bound = len(st.alphabet) * (len(dist.values()) + 1) ** dist.w_max * dist.w_max
    assert st.states <= bound


def test_d2_regression_value():
    # frozen after the mixture grid search below reached the same value
    sol = solve_mixed(d2(), D2_ALPHABET)
    assert sol.revenue == F(1, 2)
    assert dict(sol.strategy.support) == {PurePricing([2 * T, T]): F(1, 2), PurePricing([2 * T, 1]): F(1, 2)}
    assert not sol.dp.margins
    check_solution(d2(), sol)


def test_d2_oracle_certificate():
    found = brute_force_mixed(d2(), D2_ALPHABET, support_size_cap=2, prob_grid=24)
    assert found.revenue == F(1, 2)
    assert plan_mixed(d2(), D2_ALPHABET).revenue >= found.revenue


def test_d2_beats_handcrafted():
    assert plan_mixed(d2(), D2_ALPHABET).revenue >= F(13, 27)


def test_single_step_is_fixed_price():
    D = FiniteDistribution(1, [((T, 1), F(1, 2)), ((F(1), 1), F(1, 4)), ((F(1, 2), 1), F(1, 4))])
    assert plan_mixed(D, D.values()).revenue == best_fixed_price(D)[1]


def test_discretized():
    assert plan_mixed_discretized(d2(), T).revenue >= F(13, 27)
    assert plan_mixed_discretized(d1(), T).revenue >= F(2, 3)
    assert plan_mixed_discretized(d2(), 1).revenue >= 0


@pytest.mark.parametrize("eps", [F(1, 2), T, F(1, 6)])
@pytest.mark.parametrize("dist", [d1(), d2()], ids=["d1", "d2"])
def test_grid_runs_self_consistent(dist, eps):
    check_solution(dist, solve_mixed(dist, [F(k) * eps for k in range(int(1 / eps) + 1)]))


def test_random_instances_self_consistent():
    for dist in random_instances(12, seed=3):
        sol = solve_mixed(dist, dist.values())
        check_solution(dist, sol)
        assert sol.revenue >= plan_pure(dist).revenue


def test_lower_bounded_by_grid_mixtures():
    for dist in random_instances(6, seed=9, max_w=2):
        alphabet = dist.values()[:3]
        found = brute_force_mixed(dist, alphabet, support_size_cap=2, prob_grid=6)
        assert plan_mixed(dist, alphabet).revenue >= found.revenue


def test_guards():
    with pytest.raises(GuardExceeded):
        plan_mixed(d1(), [T], max_w=2)
    with pytest.raises(GuardExceeded):
        plan_mixed(d1(), [T], max_values=2)
    with pytest.raises(MarketError):
        plan_mixed(d1(), [])
