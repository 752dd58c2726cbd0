"""Normalized 0-1 knapsack decision instances and exact constraint arithmetic.

A raw instance carries positive integer weights and values. Constraints are
expressed as exact rationals in [0, 1]: a capacity fraction c of the total
weight and a profit fraction p of the total value. Feasibility is always
decided in integer or rational arithmetic; floats never decide a comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

# Exact rational carrier for normalized constraints and grid coordinates.
# fractions.Fraction keeps lowest terms and compares via arbitrary-precision
# cross multiplication, which is exactly the contract required here.
Ratio = Fraction

_MASK64 = (1 << 64) - 1

__all__ = [
    "Ratio",
    "Instance",
    "ConstraintPair",
    "SamplingModel",
    "MarkovWindow",
    "parse_ratio",
    "format_ratio",
    "normalize",
    "p_min",
    "effective_thresholds",
    "integer_thresholds",
    "sample_instance",
    "markov_window",
    "dumps_instance",
    "loads_instance",
    "write_instance",
    "read_instance",
]


def parse_ratio(text: str) -> Ratio:
    """Parse a constraint value from its decimal or fraction string, exactly.

    Decimal strings go through exact base-10 parsing ("0.44" becomes 11/25),
    never through a binary float. "a/b" fraction syntax is also accepted.
    """
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a valid ratio: {text!r}") from exc
    return value


def format_ratio(value: Ratio, digits: int = 6) -> str:
    """Render an exact rational as a fixed-point decimal string.

    Rounds half to even at the last kept digit so that CSV coordinates are
    rendered identically on every platform.
    """
    if digits < 0:
        raise ValueError("digits must be non-negative")
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    scaled, rem = divmod(num * 10**digits, den)
    if 2 * rem > den or (2 * rem == den and scaled % 2 == 1):
        scaled += 1
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class Instance:
    """An immutable 0-1 knapsack instance with positive integer entries."""

    weights: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.weights) != len(self.values):
            raise ValueError("weights and values must have identical length")
        if not self.weights:
            raise ValueError("instance needs at least one item")
        if any(w < 1 for w in self.weights) or any(v < 1 for v in self.values):
            raise ValueError("weights and values must be positive integers")

    @property
    def n(self) -> int:
        return len(self.weights)

    @cached_property
    def total_weight(self) -> int:
        return sum(self.weights)

    @cached_property
    def total_value(self) -> int:
        return sum(self.values)


@dataclass(frozen=True)
class ConstraintPair:
    """Normalized capacity and profit constraints, both exact rationals in [0, 1]."""

    c: Ratio
    p: Ratio

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "p", Fraction(self.p))
        if not (0 <= self.c <= 1):
            raise ValueError(f"c must lie in [0, 1], got {self.c}")
        if not (0 <= self.p <= 1):
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    @classmethod
    def parse(cls, c_text: str, p_text: str) -> "ConstraintPair":
        return cls(parse_ratio(c_text), parse_ratio(p_text))

    @property
    def ratio(self) -> Ratio:
        """The constrainedness ratio c/p; defined only for p > 0."""
        if self.p == 0:
            raise ZeroDivisionError("ratio undefined at p = 0")
        return self.c / self.p


@dataclass(frozen=True)
class SamplingModel:
    """Parameters of the random instance distribution.

    Weights and values are drawn i.i.d. from the discrete uniform distribution
    on [low, high]. Every instance is fully determined by (master_seed, index),
    independent of call order and thread placement.
    """

    n: int
    low: int = 1
    high: int = 10_000_000
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not (1 <= self.low <= self.high):
            raise ValueError("need 1 <= low <= high")


def sample_instance(model: SamplingModel, index: int) -> Instance:
    """Draw the instance at a given stream index, reproducibly.

    The generator is counter-based (Philox) keyed by the 128-bit pair
    (master_seed mod 2^64, index mod 2^64). The 2n draws fill weights first,
    then values. The construction is fixed: golden CSVs depend on it.
    """
    if index < 0:
        raise ValueError("index must be non-negative")
    key = np.array([model.master_seed & _MASK64, index & _MASK64], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    draws = rng.integers(model.low, model.high, endpoint=True, size=2 * model.n)
    return Instance(
        weights=tuple(int(x) for x in draws[: model.n]),
        values=tuple(int(x) for x in draws[model.n :]),
    )


@dataclass(frozen=True)
class MarkovWindow:
    """Expectation-level cardinality window for solution size.

    A solution of size k is expected to exist when p*n <= k <= c*n; the
    headline criterion is the flag c >= p. This is a heuristic about
    expectations, not a per-instance guarantee.
    """

    k_low: Ratio
    k_high: Ratio
    expected_solvable: bool

    @property
    def integer_window_empty(self) -> bool:
        """True when no integer k satisfies k_low <= k <= k_high.

        Reported for small-n diagnostics; it does not override the flag.
        """
        return math.floor(self.k_high) < math.ceil(self.k_low)


def markov_window(n: int, cp: ConstraintPair) -> MarkovWindow:
    if n < 1:
        raise ValueError("n must be at least 1")
    return MarkovWindow(k_low=cp.p * n, k_high=cp.c * n, expected_solvable=cp.c >= cp.p)


def normalize(y: int, parts: Sequence[int]) -> Ratio:
    """The normalization map sigma: y divided by the sum of parts, exactly."""
    if not parts:
        raise ValueError("parts must be non-empty")
    if any(x < 1 for x in parts):
        raise ValueError("parts must be positive integers")
    total = sum(parts)
    if not (0 <= y <= total):
        raise ValueError(f"y must lie in [0, {total}], got {y}")
    return Fraction(y, total)


def p_min(n: int) -> Ratio:
    """Smallest meaningful positive profit fraction, 1/n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return Fraction(1, n)


def effective_thresholds(inst: Instance, cp: ConstraintPair) -> tuple[Ratio, Ratio]:
    """Raw-unit thresholds (c * total_weight, p * total_value), exact.

    A subset S is a solution iff sum(weights of S) <= the first component and
    sum(values of S) >= the second, compared exactly.
    """
    return cp.c * inst.total_weight, cp.p * inst.total_value


def integer_thresholds(inst: Instance, cp: ConstraintPair) -> tuple[int, int]:
    """Integer thresholds equivalent to effective_thresholds for integer sums.

    Since subset sums are integers, w <= c*W iff w <= floor(c*W) and
    v >= p*V iff v >= ceil(p*V). All solver comparisons can therefore stay in
    plain integers.
    """
    cap_num = cp.c.numerator * inst.total_weight
    cap = cap_num // cp.c.denominator
    floor_num = cp.p.numerator * inst.total_value
    floor = -((-floor_num) // cp.p.denominator)
    return cap, floor


def dumps_instance(inst: Instance) -> str:
    """Serialize to the text format: n, weights line, values line."""
    return "{}\n{}\n{}\n".format(
        inst.n,
        " ".join(str(w) for w in inst.weights),
        " ".join(str(v) for v in inst.values),
    )


def loads_instance(text: str) -> Instance:
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) != 3:
        raise ValueError("instance text must have exactly three non-empty lines")
    try:
        n = int(lines[0])
        weights = tuple(int(tok) for tok in lines[1].split())
        values = tuple(int(tok) for tok in lines[2].split())
    except ValueError as exc:
        raise ValueError(f"malformed instance text: {exc}") from exc
    if len(weights) != n or len(values) != n:
        raise ValueError(f"expected {n} weights and {n} values")
    return Instance(weights=weights, values=values)


def write_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst))


def read_instance(path: str | Path) -> Instance:
    return loads_instance(Path(path).read_text())
