"""Offline learning: ERM, learning curves, and lower-bound constructions."""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .market import (
    BuyerType,
    FiniteDistribution,
    MarketError,
    MixedPricing,
    PurePricing,
    empirical_distribution,
    to_rational,
)
from .mixed_planner import plan_mixed
from .pure_planner import plan_pure, price_grid
from .revenue import revenue, revenue_against_type

_TWO64 = 1 << 64
THREADS_ENV = "PATIENT_PRICING_THREADS"


# -- ERM ---------------------------------------------------------------------


def erm_pure(sample: Sequence[BuyerType], w_max: int) -> PurePricing:
    return plan_pure(empirical_distribution(sample, w_max)).pricing


def grid_k(k: int) -> list[Fraction]:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise MarketError(f"grid resolution k must be a positive integer, got {k!r}")
    return price_grid(Fraction(1, k))


def erm_pure_discretized(sample: Sequence[BuyerType], w_max: int, k: int) -> PurePricing:
    """ERM restricted to prices in {0, 1/k, ..., 1}."""
    return plan_pure(empirical_distribution(sample, w_max), grid_k(k)).pricing


def erm_mixed(sample: Sequence[BuyerType], w_max: int, alphabet: Sequence, **guards) -> MixedPricing:
    return plan_mixed(empirical_distribution(sample, w_max), alphabet, **guards).strategy


# -- sampling ----------------------------------------------------------------


def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 stream derived from (seed, *keys); independent of evaluation order."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))


def _cdf_cutoffs(dist: FiniteDistribution) -> list[int]:
    cutoffs, cum = [], Fraction(0)
    for _, q in dist.support:
        cum += q
        cutoffs.append(math.ceil(cum * _TWO64))
    return cutoffs


def sample_types(dist: FiniteDistribution, m: int, rng: np.random.Generator) -> list[BuyerType]:
    """Inverse-CDF sampling: a uniform 64-bit integer against the exact cumulative sums."""
    if m < 0:
        raise MarketError("sample size must be non-negative")
    cutoffs = _cdf_cutoffs(dist)
    types = dist.types
    draws = rng.integers(0, _TWO64, size=m, dtype=np.uint64, endpoint=False)
    out = []
    for u in draws.tolist():
        out.append(types[next(j for j, c in enumerate(cutoffs) if u < c)])
    return out


# -- learning curves -----------------------------------------------------------


@dataclass(frozen=True)
class LearningCurvePoint:
    m: int
    mean_error: Fraction
    std_error: float  # standard error of the mean
    trials: int


class LearnMode(NamedTuple):
    """Strategy class plus its parameters: ``pure``, ``pure-grid`` (k) or ``mixed`` (alphabet)."""

    kind: str
    k: int | None = None
    alphabet: tuple | None = None

    def validate(self) -> "LearnMode":
        if self.kind == "pure":
            return self
        if self.kind == "pure-grid":
            grid_k(self.k if self.k is not None else 0)
            return self
        if self.kind == "mixed":
            if not self.alphabet:
                raise MarketError("mixed mode needs a non-empty price alphabet")
            return LearnMode("mixed", None, tuple(sorted({to_rational(a) for a in self.alphabet})))
        raise MarketError(f"unknown mode {self.kind!r} (expected pure, pure-grid or mixed)")


def erm(mode: LearnMode, sample, w_max: int):
    if mode.kind == "pure":
        return erm_pure(sample, w_max)
    if mode.kind == "pure-grid":
        return erm_pure_discretized(sample, w_max, mode.k)
    return erm_mixed(sample, w_max, mode.alphabet)


def benchmark(dist: FiniteDistribution, mode: LearnMode) -> Fraction:
    """Best revenue on ``dist`` within the mode's own strategy class."""
    if mode.kind == "pure":
        return plan_pure(dist).revenue
    if mode.kind == "pure-grid":
        return plan_pure(dist, grid_k(mode.k)).revenue
    return plan_mixed(dist, mode.alphabet).revenue


def worker_count() -> int:
    """Worker processes from PATIENT_PRICING_THREADS: unset means 1, 0 means all cores."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise MarketError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise MarketError(f"{THREADS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


def _trial_gap(args) -> Fraction:
    dist, mode, best, m, trial, seed = args
    sample = sample_types(dist, m, trial_rng(seed, m, trial))
    return best - revenue(erm(mode, sample, dist.w_max), dist)


def _summarize(m: int, gaps: list[Fraction]) -> LearningCurvePoint:
    mean = sum(gaps, Fraction(0)) / len(gaps)
    if len(gaps) > 1:
        std = float(np.std([float(g) for g in gaps], ddof=1)) / math.sqrt(len(gaps))
    else:
        std = 0.0
    return LearningCurvePoint(m, mean, std, len(gaps))


def learning_gaps(
    dist: FiniteDistribution,
    mode: LearnMode,
    m_values: Sequence[int],
    trials: int,
    seed: int,
    workers: int | None = None,
) -> dict[tuple[int, int], Fraction]:
    """Exact revenue gap for every (m, trial) pair."""
    mode = mode.validate()
    m_values = list(m_values)
    if not m_values or any(m < 1 for m in m_values) or m_values != sorted(set(m_values)):
        raise MarketError("m values must be positive and strictly ascending")
    if trials < 1:
        raise MarketError("trials must be >= 1")
    best = benchmark(dist, mode)
    jobs = [(dist, mode, best, m, t, seed) for m in m_values for t in range(trials)]
    workers = worker_count() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            gaps = list(pool.map(_trial_gap, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        gaps = [_trial_gap(j) for j in jobs]
    return {(j[3], j[4]): g for j, g in zip(jobs, gaps)}


def learning_curve(
    dist: FiniteDistribution,
    mode: LearnMode | str,
    m_values: Sequence[int],
    trials: int,
    seed: int,
    workers: int | None = None,
) -> list[LearningCurvePoint]:
    if isinstance(mode, str):
        mode = LearnMode(mode)
    gaps = learning_gaps(dist, mode, m_values, trials, seed, workers)
    return [_summarize(m, [gaps[(m, t)] for t in range(trials)]) for m in m_values]


# -- lower-bound families ----------------------------------------------------


def adversarial_values(w_max: int) -> dict[int, tuple[Fraction, Fraction]]:
    q = Fraction(w_max - 1, w_max)
    return {w: (q ** (2 * w - 1), q ** (2 * w)) for w in range(1, w_max + 1)}


def adversarial_distribution(sigma: Sequence[int], w_max: int, epsilon) -> FiniteDistribution:
    """Patience uniform on 1..w_max; within patience w the high value has weight q(1 + sigma_w * eps/16)."""
    if w_max < 2:
        raise MarketError("adversarial family needs w_max >= 2")
    if len(sigma) != w_max or any(s not in (-1, 1) for s in sigma):
        raise MarketError("sigma must be a vector of +1/-1 of length w_max")
    eps = to_rational(epsilon)
    if eps <= 0:
        raise MarketError("epsilon must be positive")
    alpha = eps / 16
    q = Fraction(w_max - 1, w_max)
    support = []
    for w, (v1, v2) in adversarial_values(w_max).items():
        hi = q * (1 + sigma[w - 1] * alpha)
        if not 0 < hi < 1:
            raise MarketError(f"epsilon {eps} puts a probability outside (0,1) at patience {w}")
        support.append((BuyerType(v1, w), hi / w_max))
        support.append((BuyerType(v2, w), (1 - hi) / w_max))
    return FiniteDistribution(w_max, support)


def adversarial_optimum(sigma: Sequence[int], w_max: int) -> PurePricing:
    vals = adversarial_values(w_max)
    return PurePricing([vals[i][0] if s == 1 else vals[i][1] for i, s in enumerate(sigma, start=1)])


def two_coin_distribution(sigma: int, epsilon, patience: int = 1, w_max: int = 1) -> FiniteDistribution:
    """Values 1 and 1/2 with weights 1/2 + sigma*eps and 1/2 - sigma*eps, one shared patience."""
    eps = to_rational(epsilon)
    if sigma not in (-1, 1) or not 0 < eps <= Fraction(1, 4):
        raise MarketError("two-coin family needs sigma in {-1,+1} and 0 < epsilon <= 1/4")
    return FiniteDistribution(
        w_max,
        [((1, patience), Fraction(1, 2) + sigma * eps), ((Fraction(1, 2), patience), Fraction(1, 2) - sigma * eps)],
    )


# -- fat shattering ------------------------------------------------------------


@dataclass(frozen=True)
class ShatteringInstance:
    points: tuple
    witness: tuple
    pricing_for: dict  # sign vector -> PurePricing
    gamma: Fraction
    alpha: Fraction


def _check_shattering_params(w_max, gamma, alpha):
    if w_max < 2:
        raise MarketError("shattering construction needs w_max >= 2")
    if not 0 < alpha < Fraction(1, w_max - 1):
        raise MarketError(f"alpha must lie in (0, 1/{w_max - 1})")
    if not 0 < gamma < Fraction(1, 2) - Fraction(w_max - 1, 2) * alpha:
        raise MarketError("gamma must lie in (0, 1/2 - (w_max-1) alpha / 2)")


def shattering_witness(w_max: int, gamma, alpha) -> ShatteringInstance:
    gamma, alpha = to_rational(gamma), to_rational(alpha)
    _check_shattering_params(w_max, gamma, alpha)
    n = w_max
    points = tuple(BuyerType(2 * gamma + (n - i) * alpha, i) for i in range(1, n + 1))
    c = tuple(gamma + (n - i) * alpha for i in range(1, n + 1))
    pricing_for = {}
    for sigma in itertools.product((-1, 1), repeat=n):
        # j: end of the leading run of -1 (0 if none); k: start of the trailing run (n+1 if none)
        j = next((i for i in range(n) if sigma[i] == 1), n)
        k = next((i + 2 for i in range(n - 1, -1, -1) if sigma[i] == 1), 1)
        prices = []
        last_plus = None
        for i in range(1, n + 1):
            if sigma[i - 1] == 1:
                last_plus = i
            if i <= j:
                prices.append(Fraction(1))
            elif i < k:
                prices.append(c[last_plus - 1] + gamma)
            else:
                prices.append(Fraction(0))
        pricing_for[sigma] = PurePricing(prices)
    return ShatteringInstance(points, c, pricing_for, gamma, alpha)


def verify_shattering(inst: ShatteringInstance) -> bool:
    n = len(inst.points)
    if len(inst.witness) != n or len(inst.pricing_for) != 2**n:
        return False
    for sigma, p in inst.pricing_for.items():
        for i, z in enumerate(inst.points):
            r = revenue_against_type(p, z)
            if sigma[i] == 1 and r < inst.witness[i] + inst.gamma:
                return False
            if sigma[i] == -1 and r > inst.witness[i] - inst.gamma:
                return False
    return True
