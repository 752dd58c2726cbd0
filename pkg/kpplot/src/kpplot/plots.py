"""Figure builders for the three plot kinds.

Every figure uses a fixed size, DPI and SVG hash salt, and the savers strip
the timestamp metadata, so rendering the same CSV twice produces identical
bytes. Reference landmarks are drawn dotted: the c = p diagonal on (c, p)
plots and the log_ratio = 0 vertical on ratio plots. On the isoquant overlay
solid means measured solvability and dashed means the prefix lower bound, so
dotted keeps the landmarks out of that vocabulary.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "kpplot"
# keep labels as text elements, not glyph outlines, so SVGs diff cleanly
matplotlib.rcParams["svg.fonttype"] = "none"

import matplotlib.pyplot as plt
import numpy as np

from .reader import SchemaError

__all__ = [
    "DEFAULT_LEVELS",
    "HEATMAP_FIELDS",
    "plot_heatmap",
    "plot_isoquants",
    "plot_ratio",
    "save_figure",
]

HEATMAP_FIELDS = ("probability", "nodes_median")
DEFAULT_LEVELS = (0.4, 0.6)

_FIGSIZE = (6.4, 4.8)
_DPI = 100
_FORMATS = {".svg": "svg", ".png": "png"}

Table = Mapping[str, np.ndarray]


def _require(table: Table, names: Iterable[str], source: str) -> None:
    missing = [name for name in names if name not in table]
    if missing:
        raise SchemaError(f"{source} is missing required columns: {', '.join(missing)}")


def _cell_edges(centers: np.ndarray) -> np.ndarray:
    """Bin edges around sorted cell centers, end cells mirrored outward."""
    centers = np.asarray(centers, dtype=float)
    if centers.size == 1:
        return np.array([centers[0] - 0.5, centers[0] + 0.5])
    mids = (centers[:-1] + centers[1:]) / 2.0
    first = 2.0 * centers[0] - mids[0]
    last = 2.0 * centers[-1] - mids[-1]
    return np.concatenate([[first], mids, [last]])


def _pivot(table: Table, field: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # cells may arrive in any row order and need not cover the full product
    c_values = np.unique(table["c"])
    p_values = np.unique(table["p"])
    c_index = {value: i for i, value in enumerate(c_values)}
    p_index = {value: i for i, value in enumerate(p_values)}
    z = np.full((p_values.size, c_values.size), np.nan)
    for c, p, value in zip(table["c"], table["p"], table[field]):
        z[p_index[p], c_index[c]] = value
    return c_values, p_values, z


def plot_heatmap(table: Table, field: str = "probability"):
    """Cell heatmap of a grid CSV field, c on x, p on y, diagonal marked."""
    if field not in HEATMAP_FIELDS:
        raise ValueError(f"field must be one of: {', '.join(HEATMAP_FIELDS)}")
    _require(table, ("c", "p", field), "grid csv")
    c_values, p_values, z = _pivot(table, field)
    c_edges = _cell_edges(c_values)
    p_edges = _cell_edges(p_values)

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    mesh = ax.pcolormesh(c_edges, p_edges, z, cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=field)
    lo = max(c_edges[0], p_edges[0])
    hi = min(c_edges[-1], p_edges[-1])
    if lo < hi:
        ax.plot([lo, hi], [lo, hi], color="white", linestyle=":", linewidth=1.2)
    ax.set_xlim(c_edges[0], c_edges[-1])
    ax.set_ylim(p_edges[0], p_edges[-1])
    ax.set_xlabel("c (capacity share)")
    ax.set_ylabel("p (profit share)")
    titles = {"probability": "solvability probability", "nodes_median": "median search nodes"}
    ax.set_title(titles[field])
    return fig


def plot_ratio(table: Table):
    """Probability and median nodes against log(c/p) on twin y axes."""
    _require(table, ("log_ratio", "probability", "nodes_median"), "ratio csv")
    order = np.argsort(table["log_ratio"], kind="stable")
    x = table["log_ratio"][order]

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    ax.scatter(x, table["probability"][order], s=16, color="C0")
    ax.set_ylabel("probability solvable", color="C0")
    ax.set_ylim(-0.05, 1.05)
    twin = ax.twinx()
    twin.scatter(x, table["nodes_median"][order], s=16, marker="s", color="C1")
    twin.set_ylabel("median nodes explored", color="C1")
    ax.axvline(0.0, color="gray", linestyle=":", linewidth=1.0)
    ax.set_xlabel("log(c / p)")
    finite = x[np.isfinite(x)]
    if finite.size:
        pad = 0.02 * max(float(finite.max() - finite.min()), 1e-9)
        ax.set_xlim(float(finite.min()) - pad, float(finite.max()) + pad)
    ax.set_title("solvability and effort in ratio space")
    return fig


def _column_crossings(table: Table, field: str, level: float) -> list[tuple[float, float]]:
    """First downward crossing of `level` along p, per c column.

    Linear interpolation between the straddling cells; pairs touching a
    NaN cell are skipped. Columns that never cross contribute no point.
    """
    points = []
    for c in np.unique(table["c"]):
        mask = table["c"] == c
        order = np.argsort(table["p"][mask], kind="stable")
        p_col = table["p"][mask][order]
        values = table[field][mask][order]
        for above, below, p_a, p_b in zip(values[:-1], values[1:], p_col[:-1], p_col[1:]):
            if np.isnan(above) or np.isnan(below):
                continue
            if above >= level > below:
                t = (above - level) / (above - below)
                points.append((float(c), float(p_a + t * (p_b - p_a))))
                break
    return points


def plot_isoquants(grid: Table, bounds: Table, levels: Sequence[float] = DEFAULT_LEVELS):
    """Measured isoquants (solid) against the E^L lower bound (dashed).

    One curve pair per level, matching colors. The bound curve sits at or
    below the measured curve in p wherever both cross, because
    P[E^L] <= P[E] cell by cell and both fall as p grows.
    """
    levels = tuple(levels)
    if not levels:
        raise ValueError("need at least one isoquant level")
    for level in levels:
        if not 0.0 < level < 1.0:
            raise ValueError("levels must lie strictly between 0 and 1")
    _require(grid, ("c", "p", "probability"), "grid csv")
    _require(bounds, ("c", "p", "p_EL"), "bounds csv")

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    for index, level in enumerate(levels):
        color = f"C{index}"
        actual = _column_crossings(grid, "probability", level)
        if actual:
            xs, ys = zip(*actual)
            ax.plot(xs, ys, color=color, linestyle="-", marker=".", label=f"P[E] = {level:g}")
        bound = _column_crossings(bounds, "p_EL", level)
        if bound:
            xs, ys = zip(*bound)
            ax.plot(xs, ys, color=color, linestyle="--", marker=".", label=f"P[E^L] = {level:g}")

    lo = float(min(grid["c"].min(), grid["p"].min()))
    hi = float(max(grid["c"].max(), grid["p"].max()))
    if lo < hi:
        ax.plot([lo, hi], [lo, hi], color="gray", linestyle=":", linewidth=1.0)
    pad = 0.02
    ax.set_xlim(float(grid["c"].min()) - pad, float(grid["c"].max()) + pad)
    ax.set_ylim(float(grid["p"].min()) - pad, float(grid["p"].max()) + pad)
    ax.set_xlabel("c (capacity share)")
    ax.set_ylabel("p (profit share)")
    ax.set_title("isoquants: measured vs lower bound")
    ax.legend(loc="best")
    return fig


def save_figure(fig, path: str | Path) -> Path:
    """Write a figure as .svg or .png and close it.

    SVG output omits the creation date so repeated renders of the same
    data are byte-identical.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in _FORMATS:
        raise ValueError(f"output must end in one of: {', '.join(sorted(_FORMATS))}")
    metadata = {"Date": None} if suffix == ".svg" else None
    try:
        fig.savefig(path, format=_FORMATS[suffix], metadata=metadata)
    finally:
        plt.close(fig)
    return path
