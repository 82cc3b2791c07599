from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from patient_pricing.market import BuyerType, FiniteDistribution, MixedPricing, PurePricing

F = Fraction
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# -- hypothesis strategies ------------------------------------------------------

grid_price = st.integers(0, 12).map(lambda k: F(k, 12))


@st.composite
def distributions(draw, max_w=3, max_types=4):
    w_max = draw(st.integers(1, max_w))
    types = draw(
        st.lists(
            st.tuples(grid_price, st.integers(1, w_max)), min_size=1, max_size=max_types, unique=True
        )
    )
    weights = draw(st.lists(st.integers(1, 9), min_size=len(types), max_size=len(types)))
    total = sum(weights)
    return FiniteDistribution(w_max, [(BuyerType(v, w), F(k, total)) for (v, w), k in zip(types, weights)])


@st.composite
def pure_pricings(draw, length):
    return PurePricing(draw(st.lists(grid_price, min_size=length, max_size=length)))


@st.composite
def mixed_pricings(draw, length, max_support=3):
    rows = draw(
        st.lists(st.tuples(*[grid_price] * length), min_size=1, max_size=max_support, unique=True)
    )
    weights = draw(st.lists(st.integers(1, 6), min_size=len(rows), max_size=len(rows)))
    total = sum(weights)
    return MixedPricing([(r, F(k, total)) for r, k in zip(rows, weights)])
