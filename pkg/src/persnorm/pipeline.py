"""End-to-end orchestration: config -> ingest -> norms -> tables -> files.

Every output is a deterministic function of the inputs and the config:
fixed column orders, numbers at 6 significant digits, LF newlines, and a
manifest listing each emitted file with its SHA-256 content hash.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd

from .cloud import BURNIN, LOOKBACK
from .econ import (
    BATTERY_NORMS,
    BATTERY_SPLIT,
    BATTERY_UNCERTAINTY,
    BatteryRow,
    CorrelationMatrix,
    correlation_table,
    model_battery,
)
from .errors import (
    InputError,
    IoError,
    MisalignedMonths,
    PersnormError,
    StageError,
)
from .ingest import ColumnSchema, UncertaintySeries, align_panel, load_price_csv, load_uncertainty_csv
from .norms import NormSeries, build_norm_series, standardize

_DEFAULT_PLOT_PICKS = ("FIN1", "MAC1")

_BATTERY_COLUMNS = [
    "model", "norm", "uncertainty", "window", "sample", "n", "nw_lag", "adj_r2",
    "coef_const", "t_const", "coef_uncertainty", "t_uncertainty",
    "coef_norm", "t_norm", "coef_sigma_bar", "t_sigma_bar",
]


@dataclass(frozen=True)
class PipelineConfig:
    """Everything the pipeline needs, merged from defaults, file, and flags."""

    prices: tuple[tuple[str, str], ...] = ()
    uncertainty: str | None = None
    windows: tuple[int, ...] = (1, 3, 6, 12)
    norm_dim: int = 1
    include_dim0: bool = False
    vol_mean: str = "geometric"
    nw_lag: int | str = "auto"
    padding: str = LOOKBACK
    split: str = "median"
    out_dir: str = "out"
    format: str = "csv"
    date_col: str = "date"
    price_col: str = "adj_close"
    month_col: str = "month"
    uncertainty_columns: tuple[str, ...] = ()
    plot_columns: tuple[str, ...] = ()
    dof_correction: bool = False

    def validate(self) -> None:
        if len(self.prices) < 2:
            raise InputError(f"need at least 2 price files, have {len(self.prices)}")
        labels = [lab for lab, _ in self.prices]
        if len(set(labels)) != len(labels):
            raise InputError(f"duplicate price labels: {labels}")
        if not self.windows:
            raise InputError("no window lengths configured")
        bad = [w for w in self.windows if not 1 <= int(w) <= 24]
        if bad:
            raise InputError(f"window lengths outside 1..24: {bad}")
        if len(set(self.windows)) != len(self.windows):
            raise InputError(f"duplicate window lengths: {self.windows}")
        if self.norm_dim not in (0, 1):
            raise InputError(f"norm_dim must be 0 or 1, got {self.norm_dim}")
        if self.vol_mean not in ("geometric", "arithmetic"):
            raise InputError(f"vol_mean must be geometric|arithmetic, got {self.vol_mean!r}")
        if self.padding not in (LOOKBACK, BURNIN):
            raise InputError(f"padding must be lookback|burnin, got {self.padding!r}")
        if self.split not in ("median", "none"):
            raise InputError(f"split must be median|none, got {self.split!r}")
        if self.format not in ("csv", "json"):
            raise InputError(f"format must be csv|json, got {self.format!r}")
        if self.nw_lag != "auto":
            try:
                lag = int(self.nw_lag)
            except (TypeError, ValueError):
                raise InputError(f"nw_lag must be 'auto' or an integer, got {self.nw_lag!r}") from None
            if lag < 0:
                raise InputError(f"nw_lag must be >= 0, got {lag}")


_CONFIG_KEYS = {
    "uncertainty", "windows", "norm_dim", "include_dim0", "vol_mean", "nw_lag",
    "padding", "split", "out", "format", "date_col", "price_col", "month_col",
    "uncertainty_columns", "plot_columns", "dof_correction",
}


def parse_config_file(path) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment; price.<LABEL> adds a file."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc
    values: dict = {}
    prices: list[tuple[str, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key.startswith("price."):
            label = key[len("price."):].strip()
            if not label or not value:
                raise InputError(f"{path}:{lineno}: price entries need a label and a path")
            prices.append((label, value))
        elif key in _CONFIG_KEYS:
            values[key] = value
        else:
            raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
    if prices:
        values["prices"] = tuple(prices)
    return values


def _parse_windows(raw) -> tuple[int, ...]:
    if isinstance(raw, (tuple, list)):
        return tuple(int(w) for w in raw)
    parts = [p.strip() for p in str(raw).split(",") if p.strip()]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InputError(f"bad windows list {raw!r}") from None


def _parse_names(raw) -> tuple[str, ...]:
    if isinstance(raw, (tuple, list)):
        return tuple(str(c) for c in raw)
    return tuple(p.strip() for p in str(raw).split(",") if p.strip())


def _parse_bool(raw) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise InputError(f"bad boolean {raw!r}")


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Merge defaults <- config file <- explicit overrides (highest wins)."""
    merged: dict = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if key != "prices" and key not in _CONFIG_KEYS:
                raise InputError(f"unknown config key {key!r}")
            if value is not None:
                merged[key] = value
    cfg = PipelineConfig()
    if "prices" in merged:
        cfg = replace(cfg, prices=tuple((str(a), str(b)) for a, b in merged["prices"]))
    if "uncertainty" in merged:
        cfg = replace(cfg, uncertainty=str(merged["uncertainty"]))
    if "windows" in merged:
        cfg = replace(cfg, windows=_parse_windows(merged["windows"]))
    if "norm_dim" in merged:
        cfg = replace(cfg, norm_dim=int(merged["norm_dim"]))
    if "include_dim0" in merged:
        cfg = replace(cfg, include_dim0=_parse_bool(merged["include_dim0"]))
    if "vol_mean" in merged:
        cfg = replace(cfg, vol_mean=str(merged["vol_mean"]))
    if "nw_lag" in merged:
        raw = merged["nw_lag"]
        cfg = replace(cfg, nw_lag="auto" if str(raw) == "auto" else int(raw))
    if "padding" in merged:
        cfg = replace(cfg, padding=str(merged["padding"]))
    if "split" in merged:
        cfg = replace(cfg, split=str(merged["split"]))
    if "out" in merged:
        cfg = replace(cfg, out_dir=str(merged["out"]))
    if "format" in merged:
        cfg = replace(cfg, format=str(merged["format"]))
    if "date_col" in merged:
        cfg = replace(cfg, date_col=str(merged["date_col"]))
    if "price_col" in merged:
        cfg = replace(cfg, price_col=str(merged["price_col"]))
    if "month_col" in merged:
        cfg = replace(cfg, month_col=str(merged["month_col"]))
    if "uncertainty_columns" in merged:
        cfg = replace(cfg, uncertainty_columns=_parse_names(merged["uncertainty_columns"]))
    if "plot_columns" in merged:
        cfg = replace(cfg, plot_columns=_parse_names(merged["plot_columns"]))
    if "dof_correction" in merged:
        cfg = replace(cfg, dof_correction=_parse_bool(merged["dof_correction"]))
    return cfg


# --- formatting / emission ---------------------------------------------------

def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return ""
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.6g}"
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def _json_cell(value):
    if value is None:
        return None
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return float(f"{v:.6g}")
    if isinstance(value, (np.integer, int)):
        return int(value)
    return str(value)


def _to_frame(result) -> pd.DataFrame:
    if isinstance(result, pd.DataFrame):
        return result
    if isinstance(result, CorrelationMatrix):
        frame = result.to_frame().reset_index().rename(columns={"index": "variable"})
        return frame
    if isinstance(result, NormSeries):
        return result.to_frame()
    if isinstance(result, list) and all(isinstance(r, BatteryRow) for r in result):
        rows = [{c: getattr(r, c) for c in _BATTERY_COLUMNS} for r in result]
        return pd.DataFrame(rows, columns=_BATTERY_COLUMNS)
    raise InputError(f"cannot emit object of type {type(result).__name__}")


def emit_table(result, format: str, path) -> None:
    """Write one table deterministically (stable column order, 6 sig digits)."""
    frame = _to_frame(result)
    try:
        if format == "csv":
            lines = [",".join(str(c) for c in frame.columns)]
            for row in frame.itertuples(index=False):
                lines.append(",".join(_fmt_cell(v) for v in row))
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write("\n".join(lines) + "\n")
        elif format == "json":
            rows = [
                {str(c): _json_cell(v) for c, v in zip(frame.columns, row)}
                for row in frame.itertuples(index=False)
            ]
            with open(path, "w", encoding="utf-8", newline="") as fh:
                json.dump(rows, fh, indent=1, allow_nan=False)
                fh.write("\n")
        else:
            raise InputError(f"unknown format {format!r}")
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc


def _named_columns(unc: UncertaintySeries, requested: tuple[str, ...]) -> tuple[str, ...]:
    """Requested uncertainty columns, validated; all of them when unset."""
    if requested:
        missing = [c for c in requested if c not in unc.columns]
        if missing:
            raise MisalignedMonths(f"uncertainty columns not in file: {missing}")
        return requested
    return unc.columns


def _select_columns(unc: UncertaintySeries, requested: tuple[str, ...]) -> tuple[str, ...]:
    """Plot columns: explicit request wins, then the default picks, then everything."""
    if requested:
        return _named_columns(unc, requested)
    picks = tuple(c for c in _DEFAULT_PLOT_PICKS if c in unc.columns)
    return picks if picks else unc.columns


# --- pipeline ----------------------------------------------------------------

_WANTS = {
    "compute": {"norms"},
    "correlate": {"correlations"},
    "regress": {"regressions"},
    "report": {"norms", "correlations", "regressions", "plots"},
}


def run_pipeline(config: PipelineConfig, command: str = "report") -> dict:
    """Run the pipeline and emit files for the given subcommand.

    Returns the manifest (also written to ``manifest.json`` in the output
    directory): every emitted file with its byte count and SHA-256 hash.
    """
    if command not in _WANTS:
        raise InputError(f"unknown command {command!r}")
    wants = _WANTS[command]
    needs_unc = bool({"correlations", "regressions", "plots"} & wants)

    def stage(name):
        class _Stage:
            def __enter__(self):
                return None

            def __exit__(self, exc_type, exc, tb):
                if exc is not None and isinstance(exc, PersnormError) and not isinstance(exc, StageError):
                    raise StageError(name, exc) from exc
                if exc is not None and isinstance(exc, OSError):
                    raise StageError(name, IoError(str(exc))) from exc
                return False

        return _Stage()

    with stage("config"):
        config.validate()
        if needs_unc and not config.uncertainty:
            raise InputError("this command needs an uncertainty file (set `uncertainty`)")

    with stage("ingest"):
        schema = ColumnSchema(date_col=config.date_col, price_col=config.price_col)
        series = [load_price_csv(path, schema=schema, label=label) for label, path in config.prices]
        panel = align_panel(series)
        unc = (
            load_uncertainty_csv(config.uncertainty, month_col=config.month_col)
            if needs_unc
            else None
        )

    with stage("norms"):
        norm_series: dict[int, NormSeries] = {
            w: build_norm_series(
                panel,
                w,
                padding=config.padding,
                vol_mean=config.vol_mean,
                norm_dim=config.norm_dim,
                include_dim0=config.include_dim0,
            )
            for w in config.windows
        }

    outputs: list[tuple[str, object]] = []
    if "norms" in wants:
        for w in config.windows:
            outputs.append((f"norms_{w}m", norm_series[w]))

    if "correlations" in wants:
        with stage("correlate"):
            cols = _named_columns(unc, config.uncertainty_columns)
            for w in config.windows:
                ns = norm_series[w]
                frame = pd.DataFrame(
                    {
                        "sigma_bar": ns.sigma_bar,
                        ns.l1_name: ns.l1,
                        ns.l2_name: ns.l2,
                    },
                    index=ns.months,
                )
                joined = unc.data[list(cols)].join(frame, how="inner")
                if joined.dropna().empty:
                    raise MisalignedMonths(f"no overlapping months for the {w}m window")
                outputs.append((f"correlations_{w}m", correlation_table(joined)))
            outputs.append(("uncertainty_correlations", correlation_table(unc.data)))
            if len(config.windows) > 1:
                ns0 = norm_series[config.windows[0]]
                for measure, attr in (("sigma_bar", "sigma_bar"), (ns0.l1_name, "l1"), (ns0.l2_name, "l2")):
                    per_window = pd.DataFrame(
                        {
                            f"{w}m": pd.Series(getattr(norm_series[w], attr), index=norm_series[w].months)
                            for w in config.windows
                        }
                    ).dropna()
                    outputs.append((f"cross_window_{measure}", correlation_table(per_window)))

    if "regressions" in wants:
        with stage("regress"):
            cols = _named_columns(unc, config.uncertainty_columns)
            common = dict(
                columns=cols,
                nw_lag=config.nw_lag,
                dof_correction=config.dof_correction,
            )
            outputs.append(
                ("regressions_norms", model_battery(norm_series, unc, BATTERY_NORMS, **common))
            )
            outputs.append(
                (
                    "regressions_uncertainty",
                    model_battery(norm_series, unc, BATTERY_UNCERTAINTY, **common),
                )
            )
            if config.split == "median":
                outputs.append(
                    ("regressions_splits", model_battery(norm_series, unc, BATTERY_SPLIT, **common))
                )

    if "plots" in wants:
        with stage("plots"):
            picks = _select_columns(unc, config.plot_columns or config.uncertainty_columns)
            for column in picks:
                for w in config.windows:
                    ns = norm_series[w]
                    frame = pd.DataFrame(
                        {
                            "sigma_bar": ns.sigma_bar,
                            ns.l1_name: ns.l1,
                            ns.l2_name: ns.l2,
                        },
                        index=ns.months,
                    )
                    joined = unc.data[[column]].join(frame, how="inner").dropna()
                    if joined.empty:
                        raise MisalignedMonths(f"no overlapping months for plot {column}/{w}m")
                    plot = pd.DataFrame({"month": joined.index.astype(str)})
                    for name in (column, "sigma_bar", ns.l1_name, ns.l2_name):
                        plot[f"{name}_std"] = standardize(joined[name].to_numpy())
                    outputs.append((f"plot_{column}_{w}m", plot))

    with stage("emit"):
        os.makedirs(config.out_dir, exist_ok=True)
        ext = "csv" if config.format == "csv" else "json"
        entries = []
        for name, table in outputs:
            rel = f"{name}.{ext}"
            full = os.path.join(config.out_dir, rel)
            emit_table(table, config.format, full)
            with open(full, "rb") as fh:
                blob = fh.read()
            entries.append(
                {"path": rel, "bytes": len(blob), "sha256": hashlib.sha256(blob).hexdigest()}
            )
        entries.sort(key=lambda e: e["path"])
        manifest = {
            "command": command,
            "format": config.format,
            "windows": list(config.windows),
            "files": entries,
        }
        manifest_path = os.path.join(config.out_dir, "manifest.json")
        try:
            with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
                json.dump(manifest, fh, indent=1, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise IoError(f"{manifest_path}: {exc}") from exc
    return manifest
