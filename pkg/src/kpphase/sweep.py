"""Grid experiments over (c, p) space.

A sweep decides many sampled instances at every grid cell and aggregates the
solvability probability, the search effort, and optionally the prefix
lower-bound events. The same instances are reused for every cell (the stream
index is the trial index), so probabilities across cells are coherent per
trial, not just in expectation. Projections extract the ratio-space view,
constant-probability isoquants, a hardness summary, and the constrainedness
measure kappa.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from pathlib import Path
from time import perf_counter_ns
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .core import (
    ConstraintPair,
    Ratio,
    SamplingModel,
    format_ratio,
    sample_instance,
)
from .parallel import run_indexed_tasks
from .solvers import (
    BRUTE_FORCE_LIMIT,
    _iter_subset_chunks,
    _prepare_search,
    _search_core,
    _subset_sums,
    ascending_weight_order,
)

__all__ = [
    "GridConfig",
    "ProbabilityGrid",
    "RatioPoint",
    "RatioPoint",
    "RatioProjection",
    "Isoquant",
    "KappaEstimate",
    "KappaContour",
    "HardnessSummary",
    "grid_axis",
    "run_grid",
    "ratio_projection",
    "ratio_level_crossing",
    "extract_isoquant",
    "hardness_summary",
    "kappa_value",
    "kappa",
    "kappa_line",
    "kappa_contour",
    "write_grid_csv",
    "write_ratio_csv",
    "write_isoquant_csv",
    "write_kappa_csv",
]


def grid_axis(step: Ratio) -> tuple[Ratio, ...]:
    """Grid values {0, step, 2*step, ..., 1}; step must divide 1 exactly."""
    step = Fraction(step)
    if not (0 < step <= 1):
        raise ValueError("step must lie in (0, 1]")
    count = Fraction(1) / step
    if count.denominator != 1:
        raise ValueError(f"step must divide 1 exactly, got {step}")
    return tuple(Fraction(k) * step for k in range(int(count) + 1))


@dataclass(frozen=True)
class GridConfig:
    """Configuration of a full (c, p) sweep."""

    model: SamplingModel
    step: Ratio
    trials_per_cell: int = 200
    node_budget: int | None = None
    include_bounds: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "step", Fraction(self.step))
        grid_axis(self.step)
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be positive")
        if self.node_budget is not None and self.node_budget < 1:
            raise ValueError("node_budget must be positive")


@dataclass(eq=False)
class ProbabilityGrid:
    """Aggregated sweep results over the cell matrix (c index first)."""

    config: GridConfig
    c_values: tuple[Ratio, ...]
    p_values: tuple[Ratio, ...]
    solvable: np.ndarray
    unknown: np.ndarray
    nodes: np.ndarray
    time_ns: np.ndarray
    el: np.ndarray | None = None
    eL: np.ndarray | None = None

    @property
    def trials(self) -> int:
        return self.config.trials_per_cell

    @property
    def probability(self) -> np.ndarray:
        """solvable / (trials - unknown); nan where no trial finished."""
        denom = self.trials - self.unknown
        out = np.full(self.solvable.shape, np.nan, dtype=np.float64)
        np.divide(self.solvable, denom, out=out, where=denom > 0)
        return out

    @property
    def nodes_mean(self) -> np.ndarray:
        return self.nodes.mean(axis=2)

    @property
    def nodes_median(self) -> np.ndarray:
        return np.median(self.nodes, axis=2)

    @property
    def nodes_max(self) -> np.ndarray:
        return self.nodes.max(axis=2)

    @property
    def p_El(self) -> np.ndarray | None:
        return None if self.el is None else self.el / self.trials

    @property
    def p_EL(self) -> np.ndarray | None:
        return None if self.eL is None else self.eL / self.trials


def _first_profit_size(value_cumsums: list[int], floor: int) -> int | None:
    """Smallest prefix size whose value meets the floor; 0 for a zero floor."""
    if floor <= 0:
        return 0
    idx = bisect_left(value_cumsums, floor)
    return idx + 1 if idx < len(value_cumsums) else None


def _prefix_met(weight_cumsums: list[int], value_cumsums: list[int], cap: int, floor: int) -> bool:
    s_star = bisect_right(weight_cumsums, cap)
    first = _first_profit_size(value_cumsums, floor)
    return first is not None and first <= s_star


_GridTask = tuple[
    SamplingModel, tuple[Ratio, ...], tuple[Ratio, ...], bool, int | None, int
]


def _grid_trial(args: _GridTask):
    """Decide one sampled instance at every grid cell.

    Returns per-cell verdicts (1 solvable, 0 unsolvable, -1 unknown), node
    counts, solver wall time in ns, and optionally the two prefix-event
    indicator matrices.
    """
    model, cs, ps, include_bounds, budget, index = args
    inst = sample_instance(model, index)
    tw, tv = inst.total_weight, inst.total_value
    caps = [(c.numerator * tw) // c.denominator for c in cs]
    floors = [-((-p.numerator * tv) // p.denominator) for p in ps]

    _, w, v, suffix_w, suffix_v = _prepare_search(inst)

    shape = (len(cs), len(ps))
    verdicts = np.zeros(shape, dtype=np.int8)
    nodes = np.zeros(shape, dtype=np.int32)
    time_ns = np.zeros(shape, dtype=np.int64)
    el = eL = None
    if include_bounds:
        el = np.zeros(shape, dtype=np.uint8)
        eL = np.zeros(shape, dtype=np.uint8)
        wcum = list(accumulate(inst.weights))
        vcum = list(accumulate(inst.values))
        sorted_idx = ascending_weight_order(inst)
        wcum_sorted = list(accumulate(inst.weights[i] for i in sorted_idx))
        vcum_sorted = list(accumulate(inst.values[i] for i in sorted_idx))

    for ci, cap in enumerate(caps):
        for pi, floor in enumerate(floors):
            t0 = perf_counter_ns()
            verdict, count, _ = _search_core(w, v, suffix_w, suffix_v, cap, floor, budget)
            time_ns[ci, pi] = perf_counter_ns() - t0
            verdicts[ci, pi] = verdict
            nodes[ci, pi] = count
            if include_bounds:
                el[ci, pi] = _prefix_met(wcum, vcum, cap, floor)
                eL[ci, pi] = _prefix_met(wcum_sorted, vcum_sorted, cap, floor)
    return verdicts, nodes, time_ns, el, eL


def run_grid(config: GridConfig, threads: int = 1) -> ProbabilityGrid:
    """Run the full sweep; deterministic for a given config at any thread count."""
    cs = grid_axis(config.step)
    ps = cs
    trials = config.trials_per_cell
    tasks: list[_GridTask] = [
        (config.model, cs, ps, config.include_bounds, config.node_budget, t)
        for t in range(trials)
    ]
    results = run_indexed_tasks(_grid_trial, tasks, threads)

    shape = (len(cs), len(ps))
    solvable = np.zeros(shape, dtype=np.int64)
    unknown = np.zeros(shape, dtype=np.int64)
    time_ns = np.zeros(shape, dtype=np.int64)
    el_counts = np.zeros(shape, dtype=np.int64) if config.include_bounds else None
    eL_counts = np.zeros(shape, dtype=np.int64) if config.include_bounds else None
    node_slices = []
    for verdicts, nodes, t_ns, el, eL in results:
        solvable += verdicts == 1
        unknown += verdicts == -1
        time_ns += t_ns
        node_slices.append(nodes)
        if config.include_bounds:
            el_counts += el
            eL_counts += eL
    return ProbabilityGrid(
        config=config,
        c_values=cs,
        p_values=ps,
        solvable=solvable,
        unknown=unknown,
        nodes=np.stack(node_slices, axis=2),
        time_ns=time_ns,
        el=el_counts,
        eL=eL_counts,
    )


class RatioPoint(NamedTuple):
    log_ratio: float
    probability: float
    median_nodes: float
    c: Ratio
    p: Ratio


@dataclass(frozen=True)
class RatioProjection:
    """Cells projected onto the constrainedness ratio axis.

    points are sorted by the exact ratio c/p (ties by c); skipped counts the
    cells with c = 0 or p = 0 whose log ratio is undefined or divergent.
    """

    points: tuple[RatioPoint, ...]
    skipped: int


def ratio_projection(grid: ProbabilityGrid) -> RatioProjection:
    prob = grid.probability
    medians = grid.nodes_median
    cells = []
    skipped = 0
    for ci, c in enumerate(grid.c_values):
        for pi, p in enumerate(grid.p_values):
            if c == 0 or p == 0:
                skipped += 1
                continue
            cells.append((c / p, c, float(prob[ci, pi]), float(medians[ci, pi])))
    cells.sort(key=lambda item: (item[0], item[1]))
    points = tuple(
        RatioPoint(
            log_ratio=math.log(ratio),
            probability=probability,
            median_nodes=median,
            c=c,
            p=c / ratio,
        )
        for ratio, c, probability, median in cells
    )
    return RatioProjection(points=points, skipped=skipped)


def ratio_level_crossing(projection: RatioProjection, level: float = 0.5) -> float:
    """Largest log ratio whose cell probability is still below the level.

    This is a conservative upper location for the probability-vs-log-ratio
    crossing: every point to its right sits at or above the level. Returns
    -inf when no point is below the level.
    """
    crossing = -math.inf
    for point in projection.points:
        if point.probability < level:
            crossing = max(crossing, point.log_ratio)
    return crossing


@dataclass(frozen=True)
class Isoquant:
    """Constant-probability curve: one interpolated p per covered c column."""

    level: float
    points: tuple[tuple[Ratio, float], ...]


def _column_crossing(
    p_values: Sequence[Ratio], column: np.ndarray, level: float
) -> float | None:
    """First probability crossing from >= level to < level, p interpolated."""
    for i in range(len(column) - 1):
        a, b = float(column[i]), float(column[i + 1])
        if math.isnan(a) or math.isnan(b):
            continue
        if a >= level > b:
            pa, pb = float(p_values[i]), float(p_values[i + 1])
            return pa + (a - level) / (a - b) * (pb - pa)
    return None


def extract_isoquant(grid: ProbabilityGrid, level: float) -> Isoquant:
    """Locate the level crossing in every c column; columns without one are omitted."""
    if not (0 < level < 1):
        raise ValueError("level must lie strictly between 0 and 1")
    prob = grid.probability
    points = []
    for ci, c in enumerate(grid.c_values):
        crossing = _column_crossing(grid.p_values, prob[ci], level)
        if crossing is not None:
            points.append((c, crossing))
    return Isoquant(level=level, points=tuple(points))


@dataclass(frozen=True)
class HardnessSummary:
    """Where the search effort concentrates relative to the transition band.

    The band is the set of cells with estimated probability strictly inside
    (0.05, 0.95). Band and outside medians are medians of the per-cell median
    node counts. The argmax tie-break is the first cell in row-major
    (c index, p index) order.
    """

    argmax_cell: tuple[Ratio, Ratio]
    argmax_median: float
    argmax_probability: float
    in_band: np.ndarray
    band_median_nodes: float
    outside_median_nodes: float


BAND_LOW = 0.05
BAND_HIGH = 0.95


def hardness_summary(grid: ProbabilityGrid) -> HardnessSummary:
    medians = grid.nodes_median
    prob = grid.probability
    flat = int(np.argmax(medians))
    ci, pi = np.unravel_index(flat, medians.shape)
    in_band = (prob > BAND_LOW) & (prob < BAND_HIGH)
    band_median = float(np.median(medians[in_band])) if in_band.any() else math.nan
    outside = ~in_band
    outside_median = float(np.median(medians[outside])) if outside.any() else math.nan
    return HardnessSummary(
        argmax_cell=(grid.c_values[ci], grid.p_values[pi]),
        argmax_median=float(medians[ci, pi]),
        argmax_probability=float(prob[ci, pi]),
        in_band=in_band,
        band_median_nodes=band_median,
        outside_median_nodes=outside_median,
    )


def kappa_value(expected_solutions: float, n: int) -> float:
    """kappa = 1 - log2(E[Sol])/n, with +inf when no solutions are expected."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if expected_solutions < 0:
        raise ValueError("expected_solutions must be non-negative")
    if expected_solutions == 0:
        return math.inf
    return 1.0 - math.log2(expected_solutions) / n


@dataclass(frozen=True)
class KappaEstimate:
    n: int
    cp: ConstraintPair
    trials: int
    expected_solutions: float
    kappa: float


def kappa_line(
    model: SamplingModel, cps: Sequence[ConstraintPair], trials: int
) -> list[KappaEstimate]:
    """kappa at several cells on shared instances (exhaustive census per trial).

    Sharing instances makes the expected solution count exactly monotone
    across comparable cells, not just in expectation.
    """
    if model.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"kappa needs an exhaustive census; n <= {BRUTE_FORCE_LIMIT}")
    if trials < 1:
        raise ValueError("trials must be positive")
    totals = [0] * len(cps)
    for t in range(trials):
        inst = sample_instance(model, t)
        tw, tv = inst.total_weight, inst.total_value
        caps = [(cp.c.numerator * tw) // cp.c.denominator for cp in cps]
        floors = [-((-cp.p.numerator * tv) // cp.p.denominator) for cp in cps]
        for _, wsums, vsums in _iter_subset_chunks(inst):
            for k in range(len(cps)):
                totals[k] += int(
                    np.count_nonzero((wsums <= caps[k]) & (vsums >= floors[k]))
                )
    out = []
    for cp, total in zip(cps, totals):
        expected = total / trials
        out.append(
            KappaEstimate(
                n=model.n,
                cp=cp,
                trials=trials,
                expected_solutions=expected,
                kappa=kappa_value(expected, model.n),
            )
        )
    return out


def kappa(model: SamplingModel, cp: ConstraintPair, trials: int) -> KappaEstimate:
    """Constrainedness at one cell; see kappa_line."""
    return kappa_line(model, [cp], trials)[0]


@dataclass(frozen=True)
class KappaContour:
    """Bisection bracket for the kappa = 1 contour along the line p = c + delta.

    delta_low is the largest probed offset with empirical E[Sol] >= 1 and
    delta_high the smallest with E[Sol] < 1. expected_solutions and
    prob_solvable are evaluated at delta_low. The bisection predicate
    compares integer solution totals, so the bracket is exact for the sample.
    """

    c: Ratio
    delta_low: Fraction
    delta_high: Fraction
    expected_solutions: float
    prob_solvable: float
    trials: int


_CONTOUR_LIMIT = 20


def kappa_contour(
    model: SamplingModel,
    c: Ratio,
    trials: int,
    tol: Fraction = Fraction(1, 1 << 20),
) -> KappaContour:
    """Locate the kappa = 1 contour on the line p = c + delta by bisection.

    The full subset lattice of every trial is cached as sorted feasible value
    sums, so each probe is a binary search per trial. E[Sol] is exactly
    non-increasing in delta on the shared sample, which makes the bisection
    bracket correct, not heuristic. Memory grows as 2^n per trial; n is
    capped lower than the census limit.
    """
    c = Fraction(c)
    if model.n > _CONTOUR_LIMIT:
        raise ValueError(f"contour bisection caches 2^n sums; needs n <= {_CONTOUR_LIMIT}")
    if not (0 <= c < 1):
        raise ValueError("c must lie in [0, 1)")
    if trials < 1:
        raise ValueError("trials must be positive")

    feasible_values: list[np.ndarray] = []
    total_values: list[int] = []
    for t in range(trials):
        inst = sample_instance(model, t)
        wsums = _subset_sums(inst.weights)
        vsums = _subset_sums(inst.values)
        cap = (c.numerator * inst.total_weight) // c.denominator
        fv = np.sort(vsums[wsums <= cap]).astype(np.int32)
        feasible_values.append(fv)
        total_values.append(inst.total_value)

    def census(delta: Fraction) -> tuple[int, int]:
        p = c + delta
        total = 0
        solvable = 0
        for fv, tv in zip(feasible_values, total_values):
            floor = -((-p.numerator * tv) // p.denominator)
            count = len(fv) - int(np.searchsorted(fv, floor, side="left"))
            total += count
            solvable += count >= 1
        return total, solvable

    lo, hi = -c, 1 - c
    total_lo, _ = census(lo)
    if total_lo < trials:
        raise RuntimeError("expected E[Sol] >= 1 at p = 0; sampling is inconsistent")
    total_hi, _ = census(hi)
    if total_hi >= trials:
        raise RuntimeError("no kappa = 1 crossing on the probed line")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        total_mid, _ = census(mid)
        if total_mid >= trials:
            lo = mid
        else:
            hi = mid
    total, solvable = census(lo)
    return KappaContour(
        c=c,
        delta_low=lo,
        delta_high=hi,
        expected_solutions=total / trials,
        prob_solvable=solvable / trials,
        trials=trials,
    )


def _write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_grid_csv(
    grid: ProbabilityGrid, path: str | Path, include_time: bool = False
) -> None:
    """Grid CSV, one row per cell in (c, p) ascending order.

    The optional wall-time column is excluded by default so that the file is
    byte-stable across reruns and thread counts.
    """
    header = [
        "n",
        "c",
        "p",
        "trials",
        "solvable",
        "unknown",
        "probability",
        "nodes_mean",
        "nodes_median",
        "nodes_max",
    ]
    if grid.el is not None:
        header += ["p_El", "p_EL"]
    if include_time:
        header.append("time_us_mean")
    prob = grid.probability
    mean = grid.nodes_mean
    median = grid.nodes_median
    peak = grid.nodes_max
    n = grid.config.model.n
    trials = grid.trials
    rows = []
    for ci, c in enumerate(grid.c_values):
        for pi, p in enumerate(grid.p_values):
            row = [
                str(n),
                format_ratio(c),
                format_ratio(p),
                str(trials),
                str(int(grid.solvable[ci, pi])),
                str(int(grid.unknown[ci, pi])),
                f"{prob[ci, pi]:.6f}",
                f"{mean[ci, pi]:.6f}",
                f"{median[ci, pi]:.6f}",
                str(int(peak[ci, pi])),
            ]
            if grid.el is not None:
                row.append(f"{grid.el[ci, pi] / trials:.6f}")
                row.append(f"{grid.eL[ci, pi] / trials:.6f}")
            if include_time:
                row.append(f"{grid.time_ns[ci, pi] / (1000.0 * trials):.6f}")
            rows.append(row)
    _write_csv(path, header, rows)


def write_grid_bounds_csv(grid: ProbabilityGrid, path: str | Path) -> None:
    """Per-cell event estimates in the bounds CSV schema.

    Requires a grid computed with include_bounds. Solvability is averaged
    over the trials with a known verdict; the prefix events are exact on
    every trial and averaged over all of them.
    """
    from .bounds import bounds_csv_header

    if grid.el is None:
        raise ValueError("grid was computed without include_bounds")
    n = grid.config.model.n
    trials = grid.trials
    rows = []
    for ci, c in enumerate(grid.c_values):
        for pi, p in enumerate(grid.p_values):
            kept = trials - int(grid.unknown[ci, pi])
            p_e = int(grid.solvable[ci, pi]) / kept if kept else math.nan
            se_e = math.sqrt(p_e * (1 - p_e) / kept) if kept else math.nan
            p_el = int(grid.el[ci, pi]) / trials
            p_eL = int(grid.eL[ci, pi]) / trials
            se_el = math.sqrt(p_el * (1 - p_el) / trials)
            se_eL = math.sqrt(p_eL * (1 - p_eL) / trials)
            rows.append(
                [
                    str(n),
                    format_ratio(c),
                    format_ratio(p),
                    str(trials),
                    f"{p_e:.6f}",
                    f"{p_el:.6f}",
                    f"{p_eL:.6f}",
                    f"{se_e:.6f}",
                    f"{se_el:.6f}",
                    f"{se_eL:.6f}",
                    str(int(grid.unknown[ci, pi])),
                ]
            )
    _write_csv(path, bounds_csv_header(), rows)


def write_ratio_csv(projection: RatioProjection, path: str | Path) -> None:
    rows = [
        [f"{pt.log_ratio:.6f}", f"{pt.probability:.6f}", f"{pt.median_nodes:.6f}"]
        for pt in projection.points
    ]
    _write_csv(path, ["log_ratio", "probability", "nodes_median"], rows)


def write_isoquant_csv(isoquants: Iterable[Isoquant], path: str | Path) -> None:
    rows = []
    for iso in isoquants:
        for c, p in iso.points:
            rows.append([f"{iso.level:.6f}", format_ratio(c), f"{p:.6f}"])
    _write_csv(path, ["level", "c", "p"], rows)


def write_kappa_csv(estimates: Iterable[KappaEstimate], path: str | Path) -> None:
    rows = [
        [
            str(est.n),
            format_ratio(est.cp.c),
            format_ratio(est.cp.p),
            str(est.trials),
            f"{est.expected_solutions:.6f}",
            f"{est.kappa:.6f}",
        ]
        for est in estimates
    ]
    _write_csv(path, ["n", "c", "p", "trials", "expected_solutions", "kappa"], rows)
