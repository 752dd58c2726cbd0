"""Random 0-1 knapsack decision instances and their solvability phase map.

The package samples instances with i.i.d. uniform integer weights and values,
decides them exactly, and measures how the probability of solvability and the
search effort vary across normalized capacity/profit space. All experiments
are seeded and counter-based, so results are reproducible at any parallelism.
"""

from .bounds import (
    ComplementForms,
    EventEstimate,
    PrefixProfile,
    estimate_event_probs,
    estimate_profiles,
    event_indicator_table,
    lower_bound_el,
    lower_bound_el_complement,
)
from .core import (
    ConstraintPair,
    Instance,
    MarkovWindow,
    Ratio,
    SamplingModel,
    dumps_instance,
    effective_thresholds,
    format_ratio,
    integer_thresholds,
    loads_instance,
    markov_window,
    normalize,
    p_min,
    parse_ratio,
    read_instance,
    sample_instance,
    write_instance,
)
from .solvers import (
    LatticeCensus,
    PrefixResult,
    SolveOutcome,
    Unknown,
    ascending_weight_order,
    branch_and_bound_decide,
    brute_force_decide,
    dantzig_bound,
    density_order,
    lattice_census,
    prefix_feasible,
    weight_greedy_feasible,
)
from .sweep import (
    GridConfig,
    HardnessSummary,
    Isoquant,
    KappaContour,
    KappaEstimate,
    ProbabilityGrid,
    RatioPoint,
    RatioProjection,
    extract_isoquant,
    grid_axis,
    hardness_summary,
    kappa,
    kappa_contour,
    kappa_line,
    kappa_value,
    ratio_level_crossing,
    ratio_projection,
    run_grid,
    write_grid_bounds_csv,
    write_grid_csv,
    write_isoquant_csv,
    write_kappa_csv,
    write_ratio_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
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
    "PrefixProfile",
    "EventEstimate",
    "ComplementForms",
    "estimate_profiles",
    "lower_bound_el",
    "lower_bound_el_complement",
    "event_indicator_table",
    "estimate_event_probs",
    "GridConfig",
    "ProbabilityGrid",
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
    "write_grid_bounds_csv",
    "write_ratio_csv",
    "write_isoquant_csv",
    "write_kappa_csv",
]
