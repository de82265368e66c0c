"""Rolling calendar-month windows over the return panel.

Each window becomes a point cloud with one point per trading day and one
coordinate per index (the day's log return, unscaled), plus the window's
volatility: per-index sample standard deviations combined by a geometric
(default) or arithmetic mean.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import EmptySlice, GeometricUndefined, MalformedRow, NoFullWindow, TooShort
from .ingest import ReturnMatrix

BURNIN = "burnin"
LOOKBACK = "lookback"


@dataclass(frozen=True)
class WindowSpec:
    """A rolling window: covers months anchor-length+1 ... anchor inclusive."""

    length_months: int
    anchor_month: pd.Period

    def __post_init__(self):
        if self.length_months < 1:
            raise NoFullWindow(f"window length {self.length_months} < 1")


@dataclass(frozen=True)
class PointCloud:
    """One point per trading day; coordinate j is that day's return on index j."""

    points: np.ndarray
    window: WindowSpec
    dates: pd.DatetimeIndex

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[0] != len(self.dates):
            raise EmptySlice(f"point array shape {self.points.shape} vs {len(self.dates)} dates")
        if self.points.shape[0] < 2:
            raise TooShort("point cloud needs >= 2 points")
        if not np.isfinite(self.points).all():
            raise EmptySlice("point cloud contains non-finite coordinates")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def k(self) -> int:
        return self.points.shape[1]


def window_slices(
    panel: ReturnMatrix, length_months: int, padding: str = LOOKBACK
) -> list[tuple[pd.Period, slice]]:
    """Anchor months and row ranges for every window under the policy.

    ``burnin`` keeps only anchors whose full ``length_months`` lookback lies
    inside the panel; ``lookback`` keeps every panel month as an anchor and
    truncates windows that reach past the start of the data (so a panel that
    spans exactly the analysis range yields one slice per month at every
    length, and pre-sample history, when loaded, fills the early windows).
    """
    if padding not in (BURNIN, LOOKBACK):
        raise MalformedRow(f"unknown padding policy {padding!r}")
    if length_months < 1:
        raise MalformedRow(f"window length {length_months} < 1")
    if panel.n_days == 0:
        raise NoFullWindow("empty panel")
    months = panel.month_periods()
    # month ordinal per row; rows are date-sorted so ordinals are non-decreasing
    ords = months.year.to_numpy() * 12 + (months.month.to_numpy() - 1)
    present = pd.PeriodIndex(months.unique(), freq="M")
    first_ord = int(ords[0])
    out: list[tuple[pd.Period, slice]] = []
    for anchor in present:
        a_ord = anchor.year * 12 + (anchor.month - 1)
        lo_ord = a_ord - length_months + 1
        if padding == BURNIN and lo_ord < first_ord:
            continue
        start = int(np.searchsorted(ords, lo_ord, side="left"))
        stop = int(np.searchsorted(ords, a_ord, side="right"))
        out.append((anchor, slice(start, stop)))
    if not out:
        raise NoFullWindow(
            f"panel spans {len(present)} months < window length {length_months}"
        )
    return out


def point_cloud(
    panel: ReturnMatrix, slc: slice, window: WindowSpec | None = None
) -> PointCloud:
    """Materialize the slice as a point cloud (no normalization applied)."""
    dates = panel.dates[slc]
    if len(dates) == 0:
        raise EmptySlice(f"slice {slc} selects no rows")
    if window is None:
        months = dates.to_period("M")
        span = (months[-1].year - months[0].year) * 12 + (months[-1].month - months[0].month) + 1
        window = WindowSpec(length_months=span, anchor_month=months[-1])
    return PointCloud(points=panel.values[slc].copy(), window=window, dates=dates)


def distance_matrix(cloud: PointCloud | np.ndarray) -> np.ndarray:
    """Euclidean distance matrix; exactly symmetric with a zero diagonal."""
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff * diff).sum(axis=-1))
    np.fill_diagonal(d, 0.0)
    return d


def validate_distance_matrix(d: np.ndarray, tri_tol: float = 1e-9) -> None:
    """Assert the distance-matrix invariants (used by tests and debugging)."""
    d = np.asarray(d)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise MalformedRow(f"distance matrix must be square, got {d.shape}")
    if not (np.diag(d) == 0.0).all():
        raise MalformedRow("distance matrix has a nonzero diagonal")
    if not (d == d.T).all():
        raise MalformedRow("distance matrix is not exactly symmetric")
    if not np.isfinite(d).all() or (d < 0).any():
        raise MalformedRow("distance matrix has negative or non-finite entries")
    n = d.shape[0]
    if n <= 400:  # O(n^3) check; callers with big matrices sample instead
        viol = (d[:, :, None] > d[:, None, :] + d[None, :, :] + tri_tol).any()
        if viol:
            raise MalformedRow("triangle inequality violated beyond tolerance")


def window_volatility(panel: ReturnMatrix, slc: slice, mean_kind: str = "geometric") -> float:
    """Window volatility: per-index sample std combined across indices.

    With the geometric mean, a zero per-index std makes the product collapse;
    by convention the result is 0 and a GeometricUndefined warning is issued.
    """
    if mean_kind not in ("geometric", "arithmetic"):
        raise MalformedRow(f"unknown mean kind {mean_kind!r}")
    rows = panel.values[slc]
    if rows.shape[0] < 2:
        raise TooShort(f"volatility needs >= 2 days, slice has {rows.shape[0]}")
    stds = rows.std(axis=0, ddof=1)
    if mean_kind == "arithmetic":
        return float(stds.mean())
    if (stds == 0.0).any():
        warnings.warn(
            "zero standard deviation in window; geometric mean set to 0",
            GeometricUndefined,
            stacklevel=2,
        )
        return 0.0
    return float(np.exp(np.log(stds).mean()))
