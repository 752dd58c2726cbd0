"""Monte-Carlo estimation of solvability and its prefix-feasibility lower bounds.

Three events are estimated on shared instance samples: E, the instance has a
solution; E^l, some prefix of the items in their sampled order satisfies both
constraints; E^L, the same with items sorted by ascending weight. E^l and E^L
imply E per instance, so with paired sampling the estimates are ordered by
construction. The prefix profiles f/F and g/G allow assembling P[E^l] in
closed form as sum_s f(s) * G(s), which is also exposed in two complement
variants for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import ConstraintPair, SamplingModel, sample_instance
from .parallel import run_indexed_tasks
from .solvers import (
    Unknown,
    ascending_weight_order,
    branch_and_bound_decide,
    prefix_feasible,
    weight_greedy_feasible,
)

__all__ = [
    "PrefixProfile",
    "EventEstimate",
    "ComplementForms",
    "estimate_profiles",
    "lower_bound_el",
    "lower_bound_el_complement",
    "event_indicator_table",
    "estimate_event_probs",
]

_PROFILE_ORDERINGS = ("original", "ascending_weight")


@dataclass(eq=False)
class PrefixProfile:
    """Empirical prefix-feasibility profiles over n+1 prefix sizes.

    f(s): probability that the largest capacity-feasible prefix has size s.
    F: cumulative of f. g(s): probability that the profit floor is first met
    at prefix size s (instances whose full prefix never meets the floor are
    excluded from g and tracked in never_mass). G: cumulative of g, the
    probability that the prefix of size s meets the floor.
    """

    n: int
    f: np.ndarray
    F: np.ndarray
    g: np.ndarray
    G: np.ndarray
    never_mass: float
    trials: int


class ComplementForms(NamedTuple):
    """Two complement assemblies of the prefix lower bound.

    direct_form is 1 - sum_s F(s) g(s). shifted_form is
    1 - sum_s F(s-1) g(s) with F(-1) = 0; summation by parts shows the
    shifted form equals sum_s f(s) G(s) whenever G(n) = 1, so the two
    variants differ and both are reported rather than silently reconciled.
    """

    direct_form: float
    shifted_form: float


@dataclass(frozen=True)
class EventEstimate:
    """Paired Monte-Carlo estimates of P[E], P[E^l], P[E^L].

    All three indicators are evaluated on the same instances (common random
    numbers). Standard errors are sqrt(p*(1-p)/kept) where kept counts the
    trials with a known exact verdict.
    """

    p_E: float
    p_El: float
    p_EL: float
    stderr_E: float
    stderr_El: float
    stderr_EL: float
    trials: int
    unknown_count: int = 0

    @property
    def kept(self) -> int:
        return self.trials - self.unknown_count


def _profile_trial(args: tuple[SamplingModel, ConstraintPair, str, int]) -> tuple[int, int]:
    model, cp, ordering, index = args
    inst = sample_instance(model, index)
    if ordering == "original":
        result = prefix_feasible(inst, range(inst.n), cp)
    else:
        result = prefix_feasible(inst, ascending_weight_order(inst), cp)
    first = result.first_profit_s if result.first_profit_s is not None else -1
    return result.s_star, first


def estimate_profiles(
    model: SamplingModel,
    cp: ConstraintPair,
    trials: int,
    ordering: str = "original",
    threads: int = 1,
) -> PrefixProfile:
    """Estimate f/F and g/G from prefix scans of sampled instances.

    ordering selects the item order used for the prefixes: "original" keeps
    the sampled order (the arbitrary-order event), "ascending_weight" sorts
    by weight first (the weight-greedy event). Counts are integers, so the
    result is independent of thread count.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if ordering not in _PROFILE_ORDERINGS:
        raise ValueError(f"ordering must be one of {_PROFILE_ORDERINGS}")
    n = model.n
    tasks = [(model, cp, ordering, t) for t in range(trials)]
    results = run_indexed_tasks(_profile_trial, tasks, threads)
    f_counts = np.zeros(n + 1, dtype=np.int64)
    g_counts = np.zeros(n + 1, dtype=np.int64)
    never = 0
    for s_star, first in results:
        f_counts[s_star] += 1
        if first < 0:
            never += 1
        else:
            g_counts[first] += 1
    f = f_counts / trials
    g = g_counts / trials
    return PrefixProfile(
        n=n,
        f=f,
        F=np.cumsum(f),
        g=g,
        G=np.cumsum(g),
        never_mass=never / trials,
        trials=trials,
    )


def lower_bound_el(profile: PrefixProfile) -> float:
    """Closed-form assembly sum_s f(s) * G(s) of the prefix lower bound."""
    return float(np.dot(profile.f, profile.G))


def lower_bound_el_complement(profile: PrefixProfile) -> ComplementForms:
    """Both complement assemblies of the prefix lower bound; see ComplementForms."""
    direct = 1.0 - float(np.dot(profile.F, profile.g))
    f_shifted = np.concatenate([[0.0], profile.F[:-1]])
    shifted = 1.0 - float(np.dot(f_shifted, profile.g))
    return ComplementForms(direct_form=direct, shifted_form=shifted)


def _indicator_trial(
    args: tuple[SamplingModel, ConstraintPair, int | None, int]
) -> tuple[int, int, int]:
    model, cp, node_budget, index = args
    inst = sample_instance(model, index)
    el = prefix_feasible(inst, range(inst.n), cp).profit_met
    eL = weight_greedy_feasible(inst, cp).profit_met
    outcome = branch_and_bound_decide(inst, cp, node_budget)
    if isinstance(outcome, Unknown):
        e = -1
    else:
        e = int(outcome.solvable)
    return e, int(el), int(eL)


def event_indicator_table(
    model: SamplingModel,
    cp: ConstraintPair,
    trials: int,
    node_budget: int | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Per-trial indicator rows (E, E^l, E^L) on shared instances.

    Column 0 is -1 when the exact solver exhausted its budget. Row t always
    uses the instance at stream index t, so the table is reproducible and the
    per-instance implications E^l <= E and E^L <= E hold exactly wherever
    column 0 is known.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    tasks = [(model, cp, node_budget, t) for t in range(trials)]
    rows = run_indexed_tasks(_indicator_trial, tasks, threads)
    return np.array(rows, dtype=np.int8)


def _proportion(count: int, total: int) -> tuple[float, float]:
    p = count / total
    return p, math.sqrt(p * (1.0 - p) / total)


def estimate_event_probs(
    model: SamplingModel,
    cp: ConstraintPair,
    trials: int,
    node_budget: int | None = None,
    on_unknown: str = "raise",
    threads: int = 1,
) -> EventEstimate:
    """Paired estimates of P[E], P[E^l], P[E^L] with standard errors.

    Budget-exhausted trials are an error by default; with on_unknown="drop"
    they are excluded from all three estimates (pairing is preserved) and
    reported in unknown_count.
    """
    if on_unknown not in ("raise", "drop"):
        raise ValueError('on_unknown must be "raise" or "drop"')
    table = event_indicator_table(
        model, cp, trials, node_budget=node_budget, threads=threads
    )
    unknown = int(np.count_nonzero(table[:, 0] == -1))
    if unknown and on_unknown == "raise":
        raise RuntimeError(
            f"{unknown} of {trials} trials exhausted the node budget; "
            'pass on_unknown="drop" to exclude and count them'
        )
    kept_rows = table[table[:, 0] != -1]
    kept = len(kept_rows)
    if kept == 0:
        raise RuntimeError("all trials exhausted the node budget")
    p_e, se_e = _proportion(int(kept_rows[:, 0].sum()), kept)
    p_el, se_el = _proportion(int(kept_rows[:, 1].sum()), kept)
    p_eL, se_eL = _proportion(int(kept_rows[:, 2].sum()), kept)
    return EventEstimate(
        p_E=p_e,
        p_El=p_el,
        p_EL=p_eL,
        stderr_E=se_e,
        stderr_El=se_el,
        stderr_EL=se_eL,
        trials=trials,
        unknown_count=unknown,
    )


def bounds_csv_header() -> list[str]:
    return [
        "n",
        "c",
        "p",
        "trials",
        "p_E",
        "p_El",
        "p_EL",
        "se_E",
        "se_El",
        "se_EL",
        "unknown_count",
    ]


def bounds_csv_row(
    model: SamplingModel, cp: ConstraintPair, est: EventEstimate
) -> list[str]:
    from .core import format_ratio

    return [
        str(model.n),
        format_ratio(cp.c),
        format_ratio(cp.p),
        str(est.trials),
        f"{est.p_E:.6f}",
        f"{est.p_El:.6f}",
        f"{est.p_EL:.6f}",
        f"{est.stderr_E:.6f}",
        f"{est.stderr_El:.6f}",
        f"{est.stderr_EL:.6f}",
        str(est.unknown_count),
    ]
