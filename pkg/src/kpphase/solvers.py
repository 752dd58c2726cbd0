"""Exact decision procedures for normalized knapsack instances.

Four views of the same question "is there a subset within capacity that meets
the profit floor": an exhaustive oracle over the subset lattice, a census of
that lattice, a branch-and-bound search with a fractional pruning bound, and
prefix-feasibility checks for greedy item orderings.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .core import ConstraintPair, Instance, Ratio, integer_thresholds

# 2^25 subset evaluations keep the exhaustive oracle under a few seconds;
# beyond that only branch and bound runs.
BRUTE_FORCE_LIMIT = 25
_CHUNK_BITS = 20

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "SolveOutcome",
    "Unknown",
    "LatticeCensus",
    "PrefixResult",
    "brute_force_decide",
    "lattice_census",
    "branch_and_bound_decide",
    "dantzig_bound",
    "prefix_feasible",
    "weight_greedy_feasible",
    "ascending_weight_order",
    "density_order",
]


@dataclass(frozen=True)
class SolveOutcome:
    """Verdict of an exact decision run.

    witness holds 0-based item indices and is present iff solvable; it always
    re-verifies against the exact thresholds.
    """

    solvable: bool
    witness: frozenset[int] | None
    nodes_explored: int
    elapsed_micros: int | None = None

    def __post_init__(self) -> None:
        if self.solvable != (self.witness is not None):
            raise ValueError("witness must be present exactly when solvable")
        if self.nodes_explored < 1:
            raise ValueError("nodes_explored must be at least 1")


@dataclass(frozen=True)
class Unknown:
    """Budget-exhausted verdict: never coerced to solvable or unsolvable."""

    nodes_explored: int
    elapsed_micros: int | None = None


@dataclass(frozen=True)
class LatticeCensus:
    """Counts over all 2^n subsets: capacity-feasible, profit-feasible, both."""

    n_cap: int
    n_profit: int
    n_both: int

    @property
    def solvable(self) -> bool:
        return self.n_both >= 1


@dataclass(frozen=True)
class PrefixResult:
    """Feasibility of prefixes of a fixed item ordering.

    s_star is the largest s whose prefix weight fits the capacity (prefix
    weights are strictly increasing, so larger prefixes cannot fit either).
    first_profit_s is the smallest s whose prefix value meets the profit
    floor, or None if no prefix does. profit_met records whether the prefix
    of size s_star already meets the floor, i.e. membership in the
    prefix-feasibility event for this ordering.
    """

    s_star: int
    profit_met: bool
    first_profit_s: int | None


def _guard_size(n: int) -> None:
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"exhaustive scan limited to n <= {BRUTE_FORCE_LIMIT}, got n = {n}"
        )


def _subset_sums(entries: Sequence[int]) -> np.ndarray:
    """All 2^len(entries) subset sums; index bit i corresponds to entry i."""
    sums = np.zeros(1, dtype=np.int64)
    for x in entries:
        sums = np.concatenate([sums, sums + x])
    return sums


def _iter_subset_chunks(
    inst: Instance,
) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield (mask_base, weight_sums, value_sums) covering the lattice in mask order.

    Items 0..b-1 form the low mask bits enumerated inside each chunk; the
    remaining items form the high bits enumerated across chunks, so
    concatenating chunks visits subsets in ascending mask order.
    """
    n = inst.n
    b = min(n, _CHUNK_BITS)
    low_w = _subset_sums(inst.weights[:b])
    low_v = _subset_sums(inst.values[:b])
    high = list(zip(inst.weights[b:], inst.values[b:]))
    for h in range(1 << (n - b)):
        hw = 0
        hv = 0
        m = h
        i = 0
        while m:
            if m & 1:
                hw += high[i][0]
                hv += high[i][1]
            m >>= 1
            i += 1
        yield h << b, low_w + hw, low_v + hv


def _witness_from_mask(mask: int, n: int) -> frozenset[int]:
    return frozenset(i for i in range(n) if (mask >> i) & 1)


def brute_force_decide(inst: Instance, cp: ConstraintPair) -> SolveOutcome:
    """Exhaustive oracle; witness is the first solution in subset-mask order."""
    _guard_size(inst.n)
    start = time.perf_counter_ns()
    cap, floor = integer_thresholds(inst, cp)
    witness: frozenset[int] | None = None
    for base, wsums, vsums in _iter_subset_chunks(inst):
        feasible = (wsums <= cap) & (vsums >= floor)
        if feasible.any():
            mask = base | int(np.argmax(feasible))
            witness = _witness_from_mask(mask, inst.n)
            break
    elapsed = (time.perf_counter_ns() - start) // 1000
    return SolveOutcome(
        solvable=witness is not None,
        witness=witness,
        nodes_explored=1 << inst.n,
        elapsed_micros=elapsed,
    )


def lattice_census(inst: Instance, cp: ConstraintPair) -> LatticeCensus:
    """Exact counts of capacity-feasible, profit-feasible and solution subsets."""
    _guard_size(inst.n)
    cap, floor = integer_thresholds(inst, cp)
    n_cap = 0
    n_profit = 0
    n_both = 0
    for _, wsums, vsums in _iter_subset_chunks(inst):
        cap_ok = wsums <= cap
        profit_ok = vsums >= floor
        n_cap += int(np.count_nonzero(cap_ok))
        n_profit += int(np.count_nonzero(profit_ok))
        n_both += int(np.count_nonzero(cap_ok & profit_ok))
    return LatticeCensus(n_cap=n_cap, n_profit=n_profit, n_both=n_both)


def density_order(inst: Instance) -> tuple[int, ...]:
    """Item indices by non-increasing value density v/w, ties by index."""
    return tuple(
        sorted(
            range(inst.n),
            key=lambda i: (Fraction(-inst.values[i], inst.weights[i]), i),
        )
    )


def _prepare_search(
    inst: Instance,
) -> tuple[tuple[int, ...], list[int], list[int], list[int], list[int]]:
    """Density ordering plus per-suffix weight and value totals."""
    order = density_order(inst)
    w = [inst.weights[i] for i in order]
    v = [inst.values[i] for i in order]
    n = inst.n
    suffix_w = [0] * (n + 1)
    suffix_v = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_w[i] = suffix_w[i + 1] + w[i]
        suffix_v[i] = suffix_v[i + 1] + v[i]
    return order, w, v, suffix_w, suffix_v


def _search_core(
    w: list[int],
    v: list[int],
    suffix_w: list[int],
    suffix_v: list[int],
    cap: int,
    floor: int,
    budget: int | None,
) -> tuple[int, int, int]:
    """Depth-first include/exclude search over density-ordered items.

    Returns (verdict, nodes, mask) with verdict 1 solvable, 0 unsolvable,
    -1 budget exhausted. mask is over the density-ordered positions. A node
    is pruned when its weight exceeds the capacity or when its value plus the
    fractional relaxation of the remaining items cannot reach the floor; the
    fractional comparison is done by integer cross multiplication.
    """
    n = len(w)
    nodes = 0
    # Stack entries: (depth, weight, value, include-mask). Include is pushed
    # last so it is explored first.
    stack: list[tuple[int, int, int, int]] = [(0, 0, 0, 0)]
    while stack:
        if budget is not None and nodes >= budget:
            return -1, nodes, 0
        depth, wt, val, mask = stack.pop()
        nodes += 1
        if wt > cap:
            continue
        if val >= floor:
            return 1, nodes, mask
        if depth == n:
            continue
        room = cap - wt
        if suffix_w[depth] <= room:
            if val + suffix_v[depth] < floor:
                continue
        else:
            bound = 0
            r = room
            k = depth
            while True:
                if w[k] <= r:
                    r -= w[k]
                    bound += v[k]
                    k += 1
                else:
                    break
            # val + bound + r*v_k/w_k < floor, cross-multiplied by w_k > 0.
            if (val + bound - floor) * w[k] + r * v[k] < 0:
                continue
        stack.append((depth + 1, wt, val, mask))
        stack.append((depth + 1, wt + w[depth], val + v[depth], mask | (1 << depth)))
    return 0, nodes, 0


def branch_and_bound_decide(
    inst: Instance,
    cp: ConstraintPair,
    node_budget: int | None = None,
) -> SolveOutcome | Unknown:
    """Branch-and-bound decision with fractional-bound pruning.

    Items are processed in non-increasing value-density order (ties by index)
    with include explored before exclude; the search stops at the first
    witness. nodes_explored counts visited decision nodes including the root,
    so the count is deterministic and usable as a hardness metric. When the
    node budget runs out an Unknown verdict is returned, never a guess.
    """
    if node_budget is not None and node_budget < 1:
        raise ValueError("node_budget must be positive")
    start = time.perf_counter_ns()
    cap, floor = integer_thresholds(inst, cp)
    order, w, v, suffix_w, suffix_v = _prepare_search(inst)
    verdict, nodes, mask = _search_core(w, v, suffix_w, suffix_v, cap, floor, node_budget)
    elapsed = (time.perf_counter_ns() - start) // 1000
    if verdict == -1:
        return Unknown(nodes_explored=nodes, elapsed_micros=elapsed)
    witness = None
    if verdict == 1:
        witness = frozenset(order[i] for i in range(inst.n) if (mask >> i) & 1)
    return SolveOutcome(
        solvable=verdict == 1,
        witness=witness,
        nodes_explored=nodes,
        elapsed_micros=elapsed,
    )


def dantzig_bound(
    remaining_items: Sequence[tuple[int, int]],
    remaining_capacity: Ratio | int,
) -> Ratio:
    """Fractional upper bound on achievable value within the capacity.

    remaining_items are (weight, value) pairs already sorted by non-increasing
    value density. Whole items are taken greedily; the first item that does
    not fit contributes its proportional fraction.
    """
    cap = Fraction(remaining_capacity)
    if cap < 0:
        raise ValueError("capacity must be non-negative")
    for (w1, v1), (w2, v2) in zip(remaining_items, remaining_items[1:]):
        if v1 * w2 < v2 * w1:
            raise ValueError("items must be sorted by non-increasing value density")
    total = Fraction(0)
    for w, v in remaining_items:
        if w <= cap:
            cap -= w
            total += v
        else:
            total += Fraction(v) * cap / w
            break
    return total


def prefix_feasible(
    inst: Instance, order: Sequence[int], cp: ConstraintPair
) -> PrefixResult:
    """Feasibility of prefixes of the given ordering (0-based permutation).

    The empty prefix is a legal knapsack: with a zero profit floor the result
    reports first_profit_s = 0 and profit_met = True.
    """
    n = inst.n
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    cap, floor = integer_thresholds(inst, cp)
    s_star = 0
    wt = 0
    for s, idx in enumerate(order, start=1):
        wt += inst.weights[idx]
        if wt > cap:
            break
        s_star = s
    first_profit_s: int | None
    if floor <= 0:
        first_profit_s = 0
    else:
        first_profit_s = None
        val = 0
        for s, idx in enumerate(order, start=1):
            val += inst.values[idx]
            if val >= floor:
                first_profit_s = s
                break
    profit_met = first_profit_s is not None and first_profit_s <= s_star
    return PrefixResult(
        s_star=s_star, profit_met=profit_met, first_profit_s=first_profit_s
    )


def ascending_weight_order(inst: Instance) -> tuple[int, ...]:
    """Item indices by ascending weight, ties broken by original index."""
    return tuple(sorted(range(inst.n), key=lambda i: (inst.weights[i], i)))


def weight_greedy_feasible(inst: Instance, cp: ConstraintPair) -> PrefixResult:
    """prefix_feasible under the ascending-weight ordering."""
    return prefix_feasible(inst, ascending_weight_order(inst), cp)
