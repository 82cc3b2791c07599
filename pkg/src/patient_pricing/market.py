"""Domain types for posted pricing against patient buyers.

All prices, values, probabilities and revenues are exact ``Fraction``s.
"""
from __future__ import annotations

import json
import warnings
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class MarketError(ValueError):
    """Malformed or invalid market data (distribution, strategy, sample)."""


def to_rational(x) -> Fraction:
    """Convert ``x`` to an exact Fraction.

    Accepts ints, Fractions, Decimals and strings of the form ``"a/b"``,
    ``"n"`` or a finite decimal literal such as ``"0.25"``. Floats are
    rejected because their binary expansion is rarely what the user meant.
    """
    if isinstance(x, bool):
        raise MarketError(f"not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Decimal):
        if not x.is_finite():
            raise MarketError(f"not a finite number: {x!r}")
        return Fraction(x)
    if isinstance(x, float):
        raise MarketError(f"float {x!r} is ambiguous; write it as a string 'a/b' or decimal")
    if isinstance(x, str):
        s = x.strip()
        if "..." in s or "…" in s:
            raise MarketError(f"repeating decimal {x!r} not allowed; use 'a/b'")
        try:
            if "/" in s:
                num, den = s.split("/")
                return Fraction(int(num), int(den))
            return Fraction(Decimal(s)) if any(c in s for c in ".eE") else Fraction(int(s))
        except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
            raise MarketError(f"cannot parse rational {x!r}") from exc
    raise MarketError(f"cannot parse rational {x!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class BuyerType:
    value: Fraction
    patience: int

    def __post_init__(self):
        object.__setattr__(self, "value", to_rational(self.value))
        if not 0 <= self.value <= 1:
            raise MarketError(f"value {format_rational(self.value)} outside [0,1]")
        if isinstance(self.patience, bool) or not isinstance(self.patience, int) or self.patience < 1:
            raise MarketError(f"patience must be a positive integer, got {self.patience!r}")

    def __repr__(self):
        return f"({format_rational(self.value)}, {self.patience})"


@dataclass(frozen=True)
class FiniteDistribution:
    """Distribution over buyer types with maximum patience ``w_max``.

    ``support`` is a tuple of ``(BuyerType, prob)`` sorted by type.
    """

    w_max: int
    support: tuple

    def __init__(self, w_max: int, support: Iterable):
        if isinstance(w_max, bool) or not isinstance(w_max, int) or w_max < 1:
            raise MarketError(f"w_max must be a positive integer, got {w_max!r}")
        merged: dict[BuyerType, Fraction] = {}
        for z, prob in support:
            if not isinstance(z, BuyerType):
                z = BuyerType(*z)
            prob = to_rational(prob)
            if prob <= 0:
                raise MarketError(f"probability of {z!r} must be positive, got {format_rational(prob)}")
            if z.patience > w_max:
                raise MarketError(f"patience {z.patience} outside [1, {w_max}]")
            if z in merged:
                warnings.warn(f"duplicate buyer type {z!r} merged", stacklevel=2)
                merged[z] += prob
            else:
                merged[z] = prob
        if not merged:
            raise MarketError("distribution has empty support")
        total = sum(merged.values())
        if total != 1:
            raise MarketError(f"probabilities sum to {format_rational(total)} ≠ 1")
        object.__setattr__(self, "w_max", w_max)
        object.__setattr__(self, "support", tuple(sorted(merged.items())))

    @property
    def types(self) -> list[BuyerType]:
        return [z for z, _ in self.support]

    def prob(self, z: BuyerType) -> Fraction:
        for t, q in self.support:
            if t == z:
                return q
        return Fraction(0)

    def values(self) -> list[Fraction]:
        """Sorted distinct values in the support."""
        return sorted({z.value for z, _ in self.support})

    def values_by_patience(self) -> dict[int, list[Fraction]]:
        out: dict[int, list[Fraction]] = {w: [] for w in range(1, self.w_max + 1)}
        for z, _ in self.support:
            out[z.patience].append(z.value)
        return {w: sorted(vs) for w, vs in out.items()}

    def __repr__(self):
        body = ", ".join(f"{z!r}: {format_rational(q)}" for z, q in self.support)
        return f"FiniteDistribution(w_max={self.w_max}, {{{body}}})"


@dataclass(frozen=True)
class PurePricing:
    prices: tuple

    def __init__(self, prices: Iterable):
        ps = tuple(to_rational(p) for p in prices)
        if not ps:
            raise MarketError("pricing must have at least one step")
        for p in ps:
            if not 0 <= p <= 1:
                raise MarketError(f"price {format_rational(p)} outside [0,1]")
        object.__setattr__(self, "prices", ps)

    def __len__(self):
        return len(self.prices)

    def __iter__(self):
        return iter(self.prices)

    def __getitem__(self, i):
        return self.prices[i]

    def is_non_increasing(self) -> bool:
        return all(a >= b for a, b in zip(self.prices, self.prices[1:]))

    def __repr__(self):
        return "(" + ", ".join(format_rational(p) for p in self.prices) + ")"


@dataclass(frozen=True)
class MixedPricing:
    """Finitely supported distribution over pure pricings of equal length."""

    alphabet: tuple
    support: tuple

    def __init__(self, support: Iterable, alphabet: Iterable | None = None):
        merged: dict[PurePricing, Fraction] = {}
        for pricing, prob in support:
            if not isinstance(pricing, PurePricing):
                pricing = PurePricing(pricing)
            prob = to_rational(prob)
            if prob <= 0:
                raise MarketError(f"probability of {pricing!r} must be positive")
            if pricing in merged:
                raise MarketError(f"duplicate pricing {pricing!r} in mixed strategy")
            merged[pricing] = prob
        if not merged:
            raise MarketError("mixed strategy has empty support")
        lengths = {len(p) for p in merged}
        if len(lengths) != 1:
            raise MarketError("all pricings in a mixed strategy must share one length")
        total = sum(merged.values())
        if total != 1:
            raise MarketError(f"probabilities sum to {format_rational(total)} ≠ 1")
        used = {p for pricing in merged for p in pricing}
        if alphabet is None:
            alpha = tuple(sorted(used))
        else:
            alpha = tuple(sorted({to_rational(a) for a in alphabet}))
            missing = used - set(alpha)
            if missing:
                raise MarketError(
                    "prices not in alphabet: " + ", ".join(format_rational(p) for p in sorted(missing))
                )
        object.__setattr__(self, "alphabet", alpha)
        object.__setattr__(self, "support", tuple(sorted(merged.items(), key=lambda kv: kv[0].prices)))

    @classmethod
    def point_mass(cls, pricing, alphabet=None) -> "MixedPricing":
        return cls([(pricing, 1)], alphabet=alphabet)

    @property
    def horizon(self) -> int:
        return len(self.support[0][0])

    def __repr__(self):
        body = ", ".join(f"{p!r}: {format_rational(q)}" for p, q in self.support)
        return f"MixedPricing({{{body}}})"


@dataclass(frozen=True)
class PurchaseOutcome:
    bought: bool
    step: int | None = None
    price_paid: Fraction | None = None

    def __post_init__(self):
        if self.bought != (self.step is not None) or self.bought != (self.price_paid is not None):
            raise MarketError("step and price are present exactly when the buyer bought")

    @property
    def revenue(self) -> Fraction:
        return self.price_paid if self.bought else Fraction(0)


NO_PURCHASE = PurchaseOutcome(False)


def as_mixed(strategy) -> MixedPricing:
    if isinstance(strategy, MixedPricing):
        return strategy
    if not isinstance(strategy, PurePricing):
        strategy = PurePricing(strategy)
    return MixedPricing.point_mass(strategy)


def check_horizon(length: int, dist: FiniteDistribution) -> None:
    if length != dist.w_max:
        raise MarketError(f"strategy has {length} steps but the distribution has w_max={dist.w_max}")


# -- transforms --------------------------------------------------------------


def monotonize_pure(p: PurePricing) -> PurePricing:
    """Replace every price increase by the running price (forward sweep)."""
    out = []
    for price in p:
        out.append(price if not out or price <= out[-1] else out[-1])
    return PurePricing(out)


def empirical_distribution(sample: Sequence[BuyerType], w_max: int) -> FiniteDistribution:
    if not sample:
        raise MarketError("empty sample")
    counts = Counter(z if isinstance(z, BuyerType) else BuyerType(*z) for z in sample)
    m = len(sample)
    return FiniteDistribution(w_max, [(z, Fraction(c, m)) for z, c in counts.items()])


# -- named distributions -----------------------------------------------------


def d1() -> FiniteDistribution:
    """Uniform over (1/3,3), (2/3,2), (1,1): pure strictly beats any fixed price."""
    third = Fraction(1, 3)
    return FiniteDistribution(3, [((third, 3), third), ((2 * third, 2), third), ((1, 1), third)])


def d2() -> FiniteDistribution:
    """Uniform over (1/3,2), (2/3,1), (1,2): mixed strictly beats any pure pricing."""
    third = Fraction(1, 3)
    return FiniteDistribution(2, [((third, 2), third), ((2 * third, 1), third), ((1, 2), third)])


def d2_handcrafted_mixed() -> MixedPricing:
    """The two-pricing mixture achieving 13/27 on ``d2()``."""
    t = Fraction(1, 3)
    return MixedPricing([((2 * t, t), t), ((2 * t, 1), 2 * t)], alphabet=[t, 2 * t, 1])


# -- file formats ------------------------------------------------------------


def _load_json(text: str):
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise MarketError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(doc, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise MarketError(f"missing required field {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise MarketError(f"field {key!r} has the wrong type")
    return val


def parse_distribution(text: str) -> FiniteDistribution:
    doc = _load_json(text)
    w_max = _require(doc, "w_max", int)
    entries = _require(doc, "support", list)
    support = []
    for k, entry in enumerate(entries):
        if not isinstance(entry, dict) or not {"v", "w", "prob"} <= entry.keys():
            raise MarketError(f"support entry {k} must have fields v, w, prob")
        w = entry["w"]
        if isinstance(w, bool) or not isinstance(w, int):
            raise MarketError(f"support entry {k}: patience must be an integer")
        if not 1 <= w <= w_max:
            raise MarketError(f"support entry {k}: patience {w} outside [1, {w_max}]")
        support.append((BuyerType(to_rational(entry["v"]), w), to_rational(entry["prob"])))
    return FiniteDistribution(w_max, support)


def serialize_distribution(dist: FiniteDistribution) -> str:
    doc = {
        "w_max": dist.w_max,
        "support": [
            {"v": format_rational(z.value), "w": z.patience, "prob": format_rational(q)}
            for z, q in dist.support
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_pure(text: str) -> PurePricing:
    doc = _load_json(text)
    return PurePricing(to_rational(p) for p in _require(doc, "prices", list))


def serialize_pure(p: PurePricing) -> str:
    return json.dumps({"prices": [format_rational(x) for x in p]}) + "\n"


def parse_mixed(text: str) -> MixedPricing:
    doc = _load_json(text)
    alphabet = [to_rational(a) for a in _require(doc, "alphabet", list)]
    support = []
    for k, entry in enumerate(_require(doc, "support", list)):
        if not isinstance(entry, dict) or not {"pricing", "prob"} <= entry.keys():
            raise MarketError(f"support entry {k} must have fields pricing, prob")
        support.append((PurePricing(to_rational(p) for p in entry["pricing"]), to_rational(entry["prob"])))
    return MixedPricing(support, alphabet=alphabet)


def serialize_mixed(P: MixedPricing) -> str:
    doc = {
        "alphabet": [format_rational(a) for a in P.alphabet],
        "support": [
            {"pricing": [format_rational(x) for x in pricing], "prob": format_rational(q)}
            for pricing, q in P.support
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_strategy(text: str):
    """Parse either a pure or a mixed strategy document."""
    doc = _load_json(text)
    if isinstance(doc, dict) and "prices" in doc:
        return parse_pure(text)
    return parse_mixed(text)
