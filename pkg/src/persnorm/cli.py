"""Command-line entry point.

Subcommands: ``compute`` (norm series), ``correlate`` (correlation tables),
``regress`` (regression batteries), ``report`` (everything plus plot data).
Options can come from a flat ``key = value`` config file; command-line flags
win over the file, which wins over defaults. Exit codes: 0 success, 1 input
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import InputError, NumericalError, PersnormError, StageError
from .pipeline import build_config, parse_config_file, run_pipeline

VINTAGE_CAVEAT = (
    "note: adjusted-close and uncertainty-index vintages drift over time; "
    "coefficient-level agreement with archived tables is approximate, and the "
    "reproduction check downgrades to sign agreement on slopes when vintages differ."
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help="flat key = value config file")
    p.add_argument(
        "--price",
        action="append",
        metavar="LABEL=PATH",
        help="price CSV for one index; repeat per index (replaces any file-configured set)",
    )
    p.add_argument("--uncertainty", metavar="PATH", help="monthly uncertainty CSV")
    p.add_argument("--windows", metavar="1,3,6,12", help="window lengths in months")
    p.add_argument("--norm-dim", type=int, choices=(0, 1), help="homology dimension for the norms")
    p.add_argument("--include-dim0", action="store_true", default=None, help="also emit dim-0 norms")
    p.add_argument("--vol-mean", choices=("geometric", "arithmetic"), help="volatility mean kind")
    p.add_argument("--nw-lag", metavar="auto|N", help="Newey-West lag (auto = plug-in rule)")
    p.add_argument("--padding", choices=("lookback", "burnin"), help="window policy at the sample start")
    p.add_argument("--split", choices=("median", "none"), help="high/low median split battery")
    p.add_argument("--format", choices=("csv", "json"), help="output table format")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--date-col", help="date column name in price CSVs")
    p.add_argument("--price-col", help="price column name in price CSVs")
    p.add_argument("--month-col", help="month column name in the uncertainty CSV")
    p.add_argument("--uncertainty-columns", metavar="A,B", help="uncertainty columns to analyze")
    p.add_argument("--plot-columns", metavar="A,B", help="uncertainty columns to emit plot data for")
    p.add_argument("--dof-correction", action="store_true", default=None, help="small-sample HAC correction")


def _parse_price_args(pairs: list[str]) -> tuple[tuple[str, str], ...]:
    out = []
    for item in pairs:
        label, sep, path = item.partition("=")
        if not sep or not label.strip() or not path.strip():
            raise InputError(f"--price needs LABEL=PATH, got {item!r}")
        out.append((label.strip(), path.strip()))
    return tuple(out)


def _overrides_from_args(args: argparse.Namespace) -> dict:
    over: dict = {}
    if args.price:
        over["prices"] = _parse_price_args(args.price)
    mapping = {
        "uncertainty": args.uncertainty,
        "windows": args.windows,
        "norm_dim": args.norm_dim,
        "include_dim0": args.include_dim0,
        "vol_mean": args.vol_mean,
        "nw_lag": args.nw_lag,
        "padding": args.padding,
        "split": args.split,
        "format": args.format,
        "out": args.out,
        "date_col": args.date_col,
        "price_col": args.price_col,
        "month_col": args.month_col,
        "uncertainty_columns": args.uncertainty_columns,
        "plot_columns": args.plot_columns,
        "dof_correction": args.dof_correction,
    }
    for key, value in mapping.items():
        if value is not None:
            over[key] = value
    return over


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="persnorm",
        description=(
            "Rolling persistence norms of multi-index return point clouds, "
            "with volatility, correlation tables, and uncertainty regressions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("compute", "build monthly norm series per window length"),
        ("correlate", "emit correlation tables against the uncertainty indexes"),
        ("regress", "emit the regression batteries"),
        ("report", "emit everything: norms, correlations, regressions, plot data"),
    ):
        _add_common(sub.add_parser(name, help=text))
    args = parser.parse_args(argv)

    try:
        file_values = parse_config_file(args.config) if args.config else {}
        config = build_config(file_values, _overrides_from_args(args))
        manifest = run_pipeline(config, command=args.command)
    except StageError as exc:
        print(f"error in stage {exc.stage}: {exc.original}", file=sys.stderr)
        return 2 if isinstance(exc.original, NumericalError) else 1
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PersnormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for entry in manifest["files"]:
        print(f"wrote {entry['path']} ({entry['bytes']} bytes)")
    print(f"manifest: {len(manifest['files'])} files in {config.out_dir}/manifest.json")
    if args.command == "report":
        print(VINTAGE_CAVEAT)
    return 0


if __name__ == "__main__":
    sys.exit(main())
