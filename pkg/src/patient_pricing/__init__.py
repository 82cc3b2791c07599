"""Exact revenue-optimal posted pricing against patient, strategic buyers."""

__version__ = "0.1.0"

from .market import (
    BuyerType,
    FiniteDistribution,
    MarketError,
    MixedPricing,
    PurchaseOutcome,
    PurePricing,
    d1,
    d2,
    d2_handcrafted_mixed,
    empirical_distribution,
    monotonize_pure,
    parse_distribution,
    parse_mixed,
    parse_pure,
    parse_strategy,
    serialize_distribution,
    serialize_mixed,
    serialize_pure,
    to_rational,
)
from .buyer import (
    ThresholdPolicy,
    best_response_thresholds,
    expected_utility,
    partial_utilities,
    pure_best_response,
    simulate_purchase,
)
from .revenue import best_fixed_price, empirical_revenue, revenue, revenue_mixed, revenue_pure
from .pure_planner import PurePlan, plan_pure, plan_pure_discretized, price_grid
from .mixed_planner import GuardExceeded, MixedPlan, plan_mixed, plan_mixed_discretized, solve_mixed
from .learning import (
    LearningCurvePoint,
    LearnMode,
    ShatteringInstance,
    adversarial_distribution,
    erm_mixed,
    erm_pure,
    erm_pure_discretized,
    learning_curve,
    shattering_witness,
    two_coin_distribution,
    verify_shattering,
)
from .online import RegretTrace, regret_summary, run_online
from .oracle import BudgetExceeded, brute_force_buyer, brute_force_mixed, brute_force_pure

__all__ = [
    "BudgetExceeded",
    "BuyerType",
    "FiniteDistribution",
    "GuardExceeded",
    "LearnMode",
    "LearningCurvePoint",
    "MarketError",
    "MixedPlan",
    "MixedPricing",
    "PurchaseOutcome",
    "PurePlan",
    "PurePricing",
    "RegretTrace",
    "ShatteringInstance",
    "ThresholdPolicy",
    "adversarial_distribution",
    "best_fixed_price",
    "best_response_thresholds",
    "brute_force_buyer",
    "brute_force_mixed",
    "brute_force_pure",
    "d1",
    "d2",
    "d2_handcrafted_mixed",
    "empirical_distribution",
    "empirical_revenue",
    "erm_mixed",
    "erm_pure",
    "erm_pure_discretized",
    "expected_utility",
    "learning_curve",
    "monotonize_pure",
    "parse_distribution",
    "parse_mixed",
    "parse_pure",
    "parse_strategy",
    "partial_utilities",
    "plan_mixed",
    "plan_mixed_discretized",
    "plan_pure",
    "plan_pure_discretized",
    "price_grid",
    "pure_best_response",
    "regret_summary",
    "revenue",
    "revenue_mixed",
    "revenue_pure",
    "run_online",
    "serialize_distribution",
    "serialize_mixed",
    "serialize_pure",
    "shattering_witness",
    "simulate_purchase",
    "solve_mixed",
    "to_rational",
    "two_coin_distribution",
    "verify_shattering",
]
