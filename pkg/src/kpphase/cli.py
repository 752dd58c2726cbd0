"""Command line surface: generate, solve, sweep, bounds, kappa, lattice.

Exit codes: solve reports its verdict as 0 (solvable), 1 (unsolvable) or
2 (unknown); every command reports usage or domain errors as 64, a missing
input file as 66 and other I/O failures as 70. Each file-producing command
writes a JSON manifest next to its artifacts with everything needed to
reproduce them bit-exactly (the wall-clock stamp is informational only).
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .bounds import bounds_csv_header, bounds_csv_row, estimate_event_probs
from .core import (
    ConstraintPair,
    SamplingModel,
    parse_ratio,
    read_instance,
    sample_instance,
    write_instance,
)
from .parallel import resolve_threads
from .solvers import Unknown, branch_and_bound_decide, brute_force_decide, lattice_census
from .sweep import (
    GridConfig,
    extract_isoquant,
    kappa,
    ratio_projection,
    run_grid,
    write_grid_bounds_csv,
    write_grid_csv,
    write_isoquant_csv,
    write_kappa_csv,
    write_ratio_csv,
)

EXIT_SOLVABLE = 0
EXIT_UNSOLVABLE = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_NOINPUT = 66
EXIT_FAILURE = 70

__all__ = ["RunManifest", "build_parser", "main"]


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped onto exit code 64.

    The default argparse code (2) would collide with the solve verdict
    "unknown", which is a successful outcome here.
    """

    def error(self, message: str) -> None:  # noqa: D401 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunManifest:
    """Reproduction record written next to every file artifact.

    Everything except created_utc is part of the reproducibility contract:
    re-running the command with these parameters yields byte-identical
    deterministic columns.
    """

    command: str
    version: str
    master_seed: int | None
    parameters: dict
    outputs: list
    threads: int
    created_utc: str

    @classmethod
    def create(
        cls,
        command: str,
        master_seed: int | None,
        parameters: dict,
        outputs: list,
        threads: int = 1,
    ) -> "RunManifest":
        return cls(
            command=command,
            version=__version__,
            master_seed=master_seed,
            parameters={k: str(v) for k, v in sorted(parameters.items())},
            outputs=[str(o) for o in outputs],
            threads=threads,
            created_utc=datetime.now(timezone.utc).isoformat(),
        )

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")


def _add_model_flags(parser: argparse.ArgumentParser, require_n: bool = True) -> None:
    parser.add_argument("--n", type=int, required=require_n, help="item count")
    parser.add_argument("--low", type=int, default=1, help="smallest weight/value")
    parser.add_argument(
        "--high", type=int, default=10_000_000, help="largest weight/value"
    )
    parser.add_argument("--seed", type=int, default=0, help="master seed")


def _add_cp_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--c", required=True, help="normalized capacity, decimal or a/b string"
    )
    parser.add_argument(
        "--p", required=True, help="normalized profit, decimal or a/b string"
    )


def _add_threads_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker processes (default: KP_PHASE_THREADS or 1); never changes output",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kpphase", description=__doc__)
    parser.add_argument("--version", action="version", version=f"kpphase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write random instance files")
    _add_model_flags(gen)
    gen.add_argument("--count", type=int, default=1, help="number of instances")
    gen.add_argument("--out", required=True, help="output directory")

    solve = sub.add_parser("solve", help="decide one instance file")
    solve.add_argument("instance", help="instance file path")
    _add_cp_flags(solve)
    solve.add_argument(
        "--solver", choices=("bnb", "oracle"), default="bnb", help="decision procedure"
    )
    solve.add_argument(
        "--budget", type=int, default=None, help="node budget for bnb (exit 2 if hit)"
    )

    lattice = sub.add_parser("lattice", help="exhaustive census of one instance")
    lattice.add_argument("instance", help="instance file path")
    _add_cp_flags(lattice)

    bounds = sub.add_parser(
        "bounds", help="paired estimates of P[E], P[E^l], P[E^L] at one cell"
    )
    _add_model_flags(bounds)
    _add_cp_flags(bounds)
    bounds.add_argument("--trials", type=int, default=1000)
    bounds.add_argument(
        "--budget",
        type=int,
        default=None,
        help="node budget; budget-exhausted trials are dropped and counted",
    )
    _add_threads_flag(bounds)
    bounds.add_argument("--out", default=None, help="CSV path (default: stdout)")

    kap = sub.add_parser("kappa", help="constrainedness estimate at one cell")
    _add_model_flags(kap)
    _add_cp_flags(kap)
    kap.add_argument("--trials", type=int, default=1000)
    kap.add_argument("--out", default=None, help="CSV path (default: stdout)")

    swp = sub.add_parser("sweep", help="full grid sweep driven by a config file")
    swp.add_argument("config", help="key/value config file")
    swp.add_argument("--out", default=None, help="output directory (overrides config)")
    _add_threads_flag(swp)

    return parser


def _print_or_write_csv(
    header: list[str],
    row: list[str],
    out: str | None,
    manifest: RunManifest | None,
) -> None:
    text = ",".join(header) + "\n" + ",".join(row) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    if manifest is not None:
        manifest.write(path.with_suffix(".manifest.json"))


def _cmd_generate(args: argparse.Namespace) -> int:
    model = SamplingModel(n=args.n, low=args.low, high=args.high, master_seed=args.seed)
    if args.count < 1:
        raise ValueError("count must be positive")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for index in range(args.count):
        name = f"instance_{index:04d}.txt"
        write_instance(sample_instance(model, index), out_dir / name)
        names.append(name)
    manifest = RunManifest.create(
        command="generate",
        master_seed=args.seed,
        parameters={"n": args.n, "low": args.low, "high": args.high, "count": args.count},
        outputs=names,
    )
    manifest.write(out_dir / "manifest.json")
    print(f"wrote {len(names)} instances to {out_dir}")
    return 0


def _witness_text(witness: frozenset[int]) -> str:
    return " ".join(str(i + 1) for i in sorted(witness))


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    cp = ConstraintPair.parse(args.c, args.p)
    if args.solver == "oracle":
        outcome = brute_force_decide(inst, cp)
    else:
        outcome = branch_and_bound_decide(inst, cp, node_budget=args.budget)
    if isinstance(outcome, Unknown):
        print(f"unknown nodes={outcome.nodes_explored}")
        return EXIT_UNKNOWN
    if outcome.solvable:
        print(
            f"solvable nodes={outcome.nodes_explored} "
            f"witness={_witness_text(outcome.witness)}"
        )
        return EXIT_SOLVABLE
    print(f"unsolvable nodes={outcome.nodes_explored}")
    return EXIT_UNSOLVABLE


def _cmd_lattice(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    cp = ConstraintPair.parse(args.c, args.p)
    census = lattice_census(inst, cp)
    print(f"{census.n_cap} {census.n_profit} {census.n_both}")
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    model = SamplingModel(n=args.n, low=args.low, high=args.high, master_seed=args.seed)
    cp = ConstraintPair.parse(args.c, args.p)
    threads = resolve_threads(args.threads)
    est = estimate_event_probs(
        model,
        cp,
        args.trials,
        node_budget=args.budget,
        on_unknown="drop" if args.budget is not None else "raise",
        threads=threads,
    )
    manifest = RunManifest.create(
        command="bounds",
        master_seed=args.seed,
        parameters={
            "n": args.n,
            "low": args.low,
            "high": args.high,
            "c": args.c,
            "p": args.p,
            "trials": args.trials,
            "budget": args.budget,
        },
        outputs=[args.out] if args.out else [],
        threads=threads,
    )
    _print_or_write_csv(
        bounds_csv_header(), bounds_csv_row(model, cp, est), args.out, manifest
    )
    return 0


def _cmd_kappa(args: argparse.Namespace) -> int:
    model = SamplingModel(n=args.n, low=args.low, high=args.high, master_seed=args.seed)
    cp = ConstraintPair.parse(args.c, args.p)
    est = kappa(model, cp, args.trials)
    header = ["n", "c", "p", "trials", "expected_solutions", "kappa"]
    from .core import format_ratio

    row = [
        str(est.n),
        format_ratio(est.cp.c),
        format_ratio(est.cp.p),
        str(est.trials),
        f"{est.expected_solutions:.6f}",
        f"{est.kappa:.6f}",
    ]
    manifest = RunManifest.create(
        command="kappa",
        master_seed=args.seed,
        parameters={
            "n": args.n,
            "low": args.low,
            "high": args.high,
            "c": args.c,
            "p": args.p,
            "trials": args.trials,
        },
        outputs=[args.out] if args.out else [],
    )
    _print_or_write_csv(header, row, args.out, manifest)
    return 0


_TRUE_WORDS = frozenset({"1", "yes", "true", "on"})
_FALSE_WORDS = frozenset({"0", "no", "false", "off"})


def _parse_bool(text: str) -> bool:
    word = text.strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _load_config(path: str | Path) -> dict[str, str]:
    """Flat key/value view of a config file; section headers are optional."""
    text = Path(path).read_text()
    has_header = False
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith(("#", ";")):
            continue
        has_header = stripped.startswith("[")
        break
    if not has_header:
        text = "[run]\n" + text
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ValueError(f"bad config file: {exc}") from exc
    flat: dict[str, str] = {}
    for section in parser.sections():
        flat.update(parser.items(section))
    return flat


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    known = {
        "n",
        "low",
        "high",
        "seed",
        "step",
        "trials",
        "budget",
        "include_bounds",
        "levels",
        "out",
        "threads",
    }
    unknown_keys = sorted(set(cfg) - known)
    if unknown_keys:
        raise ValueError(f"unknown config keys: {', '.join(unknown_keys)}")
    for key in ("n", "step"):
        if key not in cfg:
            raise ValueError(f"config is missing required key: {key}")

    model = SamplingModel(
        n=int(cfg["n"]),
        low=int(cfg.get("low", "1")),
        high=int(cfg.get("high", "10000000")),
        master_seed=int(cfg.get("seed", "0")),
    )
    grid_config = GridConfig(
        model=model,
        step=parse_ratio(cfg["step"]),
        trials_per_cell=int(cfg.get("trials", "200")),
        node_budget=int(cfg["budget"]) if "budget" in cfg else None,
        include_bounds=_parse_bool(cfg.get("include_bounds", "false")),
    )
    levels = [float(tok) for tok in cfg.get("levels", "0.4,0.5,0.6").split(",") if tok.strip()]
    if args.threads is not None:
        threads = resolve_threads(args.threads)
    elif "threads" in cfg:
        threads = resolve_threads(int(cfg["threads"]))
    else:
        threads = resolve_threads(None)
    out_dir = Path(args.out if args.out is not None else cfg.get("out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    grid = run_grid(grid_config, threads=threads)
    projection = ratio_projection(grid)
    isoquants = [extract_isoquant(grid, level) for level in levels]

    outputs = ["grid.csv", "ratio.csv", "isoquant.csv"]
    write_grid_csv(grid, out_dir / "grid.csv")
    write_ratio_csv(projection, out_dir / "ratio.csv")
    write_isoquant_csv(isoquants, out_dir / "isoquant.csv")
    if grid_config.include_bounds:
        write_grid_bounds_csv(grid, out_dir / "bounds.csv")
        outputs.append("bounds.csv")

    manifest = RunManifest.create(
        command="sweep",
        master_seed=model.master_seed,
        parameters={
            "n": model.n,
            "low": model.low,
            "high": model.high,
            "step": str(grid_config.step),
            "trials": grid_config.trials_per_cell,
            "budget": grid_config.node_budget,
            "include_bounds": grid_config.include_bounds,
            "levels": ",".join(f"{level:g}" for level in levels),
        },
        outputs=outputs,
        threads=threads,
    )
    manifest.write(out_dir / "manifest.json")
    print(f"wrote {', '.join(outputs)} to {out_dir}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "lattice": _cmd_lattice,
    "bounds": _cmd_bounds,
    "kappa": _cmd_kappa,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"kpphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"kpphase: missing input: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except OSError as exc:
        print(f"kpphase: i/o failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
