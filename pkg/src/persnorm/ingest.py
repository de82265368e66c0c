"""Load price and uncertainty CSVs and build an aligned daily return panel.

Price files are per-index CSVs with a ``date`` column (ISO-8601) and an
``adj_close`` column (configurable names). The panel aligns all indices on
the strict intersection of their trading days; log returns across alignment
gaps are taken between adjacent aligned days, so total return is preserved
and nothing is silently interpolated.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import (
    DuplicateDate,
    EmptyFile,
    EmptyIntersection,
    MalformedRow,
    NonPositivePrice,
    TooShort,
)

_MONTH_RE = re.compile(r"^\d{4}-\d{2}$")


@dataclass(frozen=True)
class ColumnSchema:
    """Column-name mapping for price CSVs."""

    date_col: str = "date"
    price_col: str = "adj_close"


@dataclass(frozen=True)
class PriceSeries:
    """Adjusted daily closes for one index.

    Dates are strictly increasing and every price is finite and positive.
    """

    label: str
    dates: pd.DatetimeIndex
    prices: np.ndarray

    def __post_init__(self):
        if len(self.dates) != len(self.prices):
            raise MalformedRow(f"{self.label}: {len(self.dates)} dates vs {len(self.prices)} prices")
        if len(self.dates) > 1 and not (self.dates[1:] > self.dates[:-1]).all():
            raise DuplicateDate(f"{self.label}: dates not strictly increasing")
        bad = ~np.isfinite(self.prices) | (self.prices <= 0.0)
        if bad.any():
            i = int(np.argmax(bad))
            raise NonPositivePrice(f"{self.label}: price {self.prices[i]!r} on {self.dates[i].date()}")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class ReturnMatrix:
    """Aligned daily log returns, one column per index.

    Row ``t`` holds returns dated by day ``t`` (computed against the previous
    aligned day). ``dropped`` counts the trading days each index lost to the
    calendar intersection.
    """

    dates: pd.DatetimeIndex
    values: np.ndarray
    labels: tuple[str, ...]
    dropped: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (len(self.dates), len(self.labels)):
            raise MalformedRow(
                f"return matrix shape {self.values.shape} vs "
                f"{len(self.dates)} dates x {len(self.labels)} labels"
            )
        if not np.isfinite(self.values).all():
            raise MalformedRow("return matrix contains non-finite values")

    @property
    def n_days(self) -> int:
        return len(self.dates)

    @property
    def k(self) -> int:
        return len(self.labels)

    def month_periods(self) -> pd.PeriodIndex:
        """Calendar month of each row."""
        return self.dates.to_period("M")


@dataclass(frozen=True)
class UncertaintySeries:
    """Named monthly series (uncertainty indexes), keyed by calendar month."""

    months: pd.PeriodIndex
    data: pd.DataFrame

    def __post_init__(self):
        if len(self.months) != len(self.data):
            raise MalformedRow("months and data rows differ in length")
        if len(self.months) > 1 and not (self.months[1:] > self.months[:-1]).all():
            raise MalformedRow("months not strictly increasing")
        vals = self.data.to_numpy(dtype=float)
        present = ~np.isnan(vals)
        if not np.isfinite(vals[present]).all():
            raise MalformedRow("uncertainty series contains non-finite values")

    @property
    def columns(self) -> tuple[str, ...]:
        return tuple(self.data.columns)

    def __len__(self) -> int:
        return len(self.months)


def load_price_csv(path, schema: ColumnSchema | None = None, label: str | None = None) -> PriceSeries:
    """Read one price CSV into a PriceSeries.

    Rows must carry an ISO-8601 date and a positive price; anything else
    raises (MalformedRow, NonPositivePrice, DuplicateDate, EmptyFile).
    """
    schema = schema or ColumnSchema()
    name = label if label is not None else str(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise MalformedRow(f"{path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyFile(f"{path}: no header row")
        for col in (schema.date_col, schema.price_col):
            if col not in reader.fieldnames:
                raise MalformedRow(f"{path}: missing column {col!r}")
        dates: list[np.datetime64] = []
        prices: list[float] = []
        for lineno, row in enumerate(reader, start=2):
            raw_date = (row.get(schema.date_col) or "").strip()
            raw_price = (row.get(schema.price_col) or "").strip()
            if not raw_date or not raw_price:
                raise MalformedRow(f"{path}:{lineno}: missing date or price")
            parsed = pd.Timestamp(_parse_iso_date(raw_date, path, lineno))
            try:
                price = float(raw_price)
            except ValueError as exc:
                raise MalformedRow(f"{path}:{lineno}: bad price {raw_price!r}") from exc
            if not math.isfinite(price) or price <= 0.0:
                raise NonPositivePrice(f"{path}:{lineno}: price {raw_price}")
            dates.append(parsed)
            prices.append(price)
    if not dates:
        raise EmptyFile(f"{path}: no data rows")
    idx = pd.DatetimeIndex(dates)
    order = idx.argsort()
    idx = idx[order]
    vals = np.asarray(prices, dtype=float)[order]
    if len(idx) > 1 and (idx[1:] == idx[:-1]).any():
        dup = idx[1:][(idx[1:] == idx[:-1])][0]
        raise DuplicateDate(f"{path}: duplicated date {dup.date()}")
    return PriceSeries(label=name, dates=idx, prices=vals)


def _parse_iso_date(raw: str, path, lineno: int):
    import datetime

    try:
        return datetime.date.fromisoformat(raw)
    except ValueError as exc:
        raise MalformedRow(f"{path}:{lineno}: bad date {raw!r} (ISO-8601 required)") from exc


def log_returns(series: PriceSeries) -> pd.Series:
    """Daily log returns ln(p_t) - ln(p_{t-1}), dated by day t."""
    if len(series) < 2:
        raise TooShort(f"{series.label}: need >= 2 prices, have {len(series)}")
    vals = np.diff(np.log(series.prices))
    return pd.Series(vals, index=series.dates[1:], name=series.label)


def align_panel(series_list: list[PriceSeries]) -> ReturnMatrix:
    """Align indices on their common trading days and compute log returns.

    Returns across alignment gaps use adjacent aligned prices (multi-day log
    return). The drop report counts days each index lost to the intersection.
    """
    if not series_list:
        raise EmptyIntersection("no price series supplied")
    common = series_list[0].dates
    for s in series_list[1:]:
        common = common.intersection(s.dates)
    if len(common) == 0:
        raise EmptyIntersection("price series share no common dates")
    if len(common) < 2:
        raise TooShort("fewer than 2 common dates; cannot form returns")
    common = common.sort_values()
    cols = []
    dropped: dict[str, int] = {}
    for s in series_list:
        pos = s.dates.get_indexer(common)
        aligned = s.prices[pos]
        dropped[s.label] = len(s) - len(common)
        cols.append(np.diff(np.log(aligned)))
    values = np.column_stack(cols)
    return ReturnMatrix(
        dates=common[1:],
        values=values,
        labels=tuple(s.label for s in series_list),
        dropped=dropped,
    )


def load_uncertainty_csv(path, month_col: str = "month") -> UncertaintySeries:
    """Read a monthly CSV (YYYY-MM month column + named value columns).

    Unknown columns are preserved verbatim; empty cells become missing
    values; months must be strictly increasing.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise MalformedRow(f"{path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyFile(f"{path}: no header row")
        if month_col not in reader.fieldnames:
            raise MalformedRow(f"{path}: missing column {month_col!r}")
        value_cols = [c for c in reader.fieldnames if c != month_col]
        if not value_cols:
            raise MalformedRow(f"{path}: no value columns besides {month_col!r}")
        months: list[pd.Period] = []
        rows: list[list[float]] = []
        prev: pd.Period | None = None
        for lineno, row in enumerate(reader, start=2):
            raw_month = (row.get(month_col) or "").strip()
            if not _MONTH_RE.match(raw_month):
                raise MalformedRow(f"{path}:{lineno}: bad month {raw_month!r} (YYYY-MM required)")
            period = pd.Period(raw_month, freq="M")
            if prev is not None and period <= prev:
                raise MalformedRow(f"{path}:{lineno}: month {raw_month} not after {prev}")
            prev = period
            vals = []
            for c in value_cols:
                raw = (row.get(c) or "").strip()
                if raw == "":
                    vals.append(math.nan)
                    continue
                try:
                    v = float(raw)
                except ValueError as exc:
                    raise MalformedRow(f"{path}:{lineno}: bad value {raw!r} in {c}") from exc
                if math.isinf(v):
                    raise MalformedRow(f"{path}:{lineno}: non-finite value in {c}")
                vals.append(v)
            months.append(period)
            rows.append(vals)
    if not months:
        raise EmptyFile(f"{path}: no data rows")
    idx = pd.PeriodIndex(months, freq="M")
    frame = pd.DataFrame(rows, index=idx, columns=value_cols, dtype=float)
    return UncertaintySeries(months=idx, data=frame)
