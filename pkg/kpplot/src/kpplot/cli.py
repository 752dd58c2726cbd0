"""Command line surface: kpplot <kind> <csv...> -o <image>.

Kinds: heatmap (grid CSV), ratio_scatter (ratio CSV), isoquants (grid CSV
then bounds CSV). Usage, schema and domain errors exit 64, a missing input
file exits 66 and other I/O failures exit 70, matching the conventions of
the CSV producer.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .plots import (
    DEFAULT_LEVELS,
    HEATMAP_FIELDS,
    plot_heatmap,
    plot_isoquants,
    plot_ratio,
    save_figure,
)
from .reader import read_columns

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_NOINPUT = 66
EXIT_FAILURE = 70

__all__ = ["build_parser", "main"]

_CSV_COUNTS = {"heatmap": 1, "ratio_scatter": 1, "isoquants": 2}


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped onto exit code 64."""

    def error(self, message: str) -> None:  # noqa: D401 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_levels(text: str) -> tuple[float, ...]:
    parts = [piece.strip() for piece in text.split(",") if piece.strip()]
    if not parts:
        raise ValueError("need at least one isoquant level")
    return tuple(float(piece) for piece in parts)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="kpplot",
        description="Render phase-transition figures from sweep CSV artifacts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("kind", choices=sorted(_CSV_COUNTS))
    parser.add_argument("csvs", nargs="+", metavar="csv", help="input CSV file(s)")
    parser.add_argument("-o", "--out", required=True, help="output image (.svg or .png)")
    parser.add_argument(
        "--levels",
        default=",".join(str(level) for level in DEFAULT_LEVELS),
        help="comma-separated isoquant levels (isoquants only)",
    )
    parser.add_argument(
        "--field",
        choices=HEATMAP_FIELDS,
        default="probability",
        help="grid column to map (heatmap only)",
    )
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    # reject before rendering anything
    if out.suffix.lower() not in (".svg", ".png"):
        raise ValueError("output must end in one of: .png, .svg")
    expected = _CSV_COUNTS[args.kind]
    if len(args.csvs) != expected:
        plural = "s" if expected > 1 else ""
        raise ValueError(f"{args.kind} takes exactly {expected} csv file{plural}")
    if args.kind == "heatmap":
        fig = plot_heatmap(read_columns(args.csvs[0]), field=args.field)
    elif args.kind == "ratio_scatter":
        fig = plot_ratio(read_columns(args.csvs[0]))
    else:
        levels = _parse_levels(args.levels)
        fig = plot_isoquants(read_columns(args.csvs[0]), read_columns(args.csvs[1]), levels)
    save_figure(fig, out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValueError as exc:
        # SchemaError is a ValueError, so malformed CSVs land here too
        print(f"kpplot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"kpplot: missing input: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except OSError as exc:
        print(f"kpplot: i/o failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
