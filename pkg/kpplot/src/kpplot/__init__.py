"""Batch figure rendering for knapsack phase-transition CSV artifacts.

Consumes only the CSV files written by the sweep tooling; never imports
the producer package.
"""

__version__ = "0.1.0"

from .plots import (
    DEFAULT_LEVELS,
    HEATMAP_FIELDS,
    plot_heatmap,
    plot_isoquants,
    plot_ratio,
    save_figure,
)
from .reader import SchemaError, read_columns

__all__ = [
    "DEFAULT_LEVELS",
    "HEATMAP_FIELDS",
    "SchemaError",
    "__version__",
    "plot_heatmap",
    "plot_isoquants",
    "plot_ratio",
    "read_columns",
    "save_figure",
]
