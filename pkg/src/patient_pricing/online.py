"""Doubling-epoch online ERM with exact expected regret.

The seller recomputes its ERM strategy at rounds 1, 2, 4, ... on every
type observed so far and keeps it until the next power of two. Regret in
round ``t`` is the expected shortfall ``r(P*; D) - r(P_t; D)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .learning import LearnMode, benchmark, erm, sample_types, trial_rng
from .market import FiniteDistribution, MarketError, MixedPricing, PurePricing
from .revenue import revenue


@dataclass
class RegretTrace:
    mode: str
    seed: int
    benchmark: Fraction
    epoch: list = field(default_factory=list)  # per round: epoch index (strategy id)
    instant: list = field(default_factory=list)
    cumulative: list = field(default_factory=list)
    strategies: list = field(default_factory=list)  # per epoch
    erm_calls: int = 0

    @property
    def T(self) -> int:
        return len(self.instant)


def initial_strategy(mode: LearnMode, w_max: int):
    ones = PurePricing([1] * w_max)
    return ones if mode.kind != "mixed" else MixedPricing.point_mass(ones)


def run_online(
    dist: FiniteDistribution,
    T: int,
    mode: LearnMode | str = "pure",
    seed: int = 0,
    alphabet: Sequence | None = None,
) -> RegretTrace:
    if isinstance(T, bool) or not isinstance(T, int) or T < 1:
        raise MarketError(f"T must be a positive integer, got {T!r}")
    if isinstance(mode, str):
        mode = LearnMode(mode, alphabet=tuple(alphabet) if alphabet is not None else None)
    mode = mode.validate()
    best = benchmark(dist, mode)
    horizon = 1 << (T - 1).bit_length()  # T rounded up to a power of two
    types = sample_types(dist, horizon, trial_rng(seed, horizon))

    trace = RegretTrace(mode.kind, seed, best)
    cum = Fraction(0)
    regret = None
    for t in range(1, T + 1):
        if t & (t - 1) == 0:  # t = 1, 2, 4, ...
            history = types[: t - 1]
            P = erm(mode, history, dist.w_max) if history else initial_strategy(mode, dist.w_max)
            trace.erm_calls += 1
            trace.strategies.append(P)
            regret = best - revenue(P, dist)
        cum += regret
        trace.epoch.append(len(trace.strategies) - 1)
        trace.instant.append(regret)
        trace.cumulative.append(cum)
    return trace


@dataclass
class RegretSummary:
    T: int
    mode: str
    checkpoints: list  # (t, mean cumulative regret, std)
    slope: float | None  # log-log slope of mean cumulative regret; None when flat

    @property
    def slope_label(self) -> str:
        return "flat" if self.slope is None else f"{self.slope:.12g}"


def regret_summary(traces: Sequence[RegretTrace], fit_at: Sequence[int] | None = None) -> RegretSummary:
    """Mean/std cumulative regret at powers of two and the fitted log-log slope.

    ``fit_at`` restricts the fit to those checkpoints (default: all).
    """
    if not traces:
        raise MarketError("no traces to summarize")
    T, mode = traces[0].T, traces[0].mode
    if any(tr.T != T or tr.mode != mode for tr in traces):
        raise MarketError("traces must share T and mode")
    points = [1 << k for k in range(T.bit_length()) if (1 << k) <= T]
    rows = []
    for t in points:
        vals = np.array([float(tr.cumulative[t - 1]) for tr in traces])
        std = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0
        rows.append((t, float(vals.mean()), std))
    use = set(points if fit_at is None else fit_at)
    fit = [(t, mean) for t, mean, _ in rows if t in use and mean > 0]
    slope = None
    if len(fit) >= 2:
        xs = np.log([t for t, _ in fit])
        ys = np.log([m for _, m in fit])
        slope = float(np.polyfit(xs, ys, 1)[0])
        if math.isclose(slope, 0.0, abs_tol=1e-15):
            slope = 0.0
    return RegretSummary(T, mode, rows, slope)
