"""
Monthly windows, point clouds, and distance matrices
=====================================================

Each calendar month of aligned daily returns is a point cloud: one point
per trading day, one coordinate per index.  Longer windows look back over
the preceding months, so every month still contributes one cloud.
"""

import tempfile
from pathlib import Path

import numpy as np

from persnorm import (
    align_panel,
    distance_matrix,
    load_price_csv,
    point_cloud,
    window_slices,
    window_volatility,
)

import pandas as pd

# Build a small three-index market: correlated geometric walks over two
# years of business days, written out and re-read as ordinary price CSVs.
out = Path(tempfile.mkdtemp(prefix="persnorm_demo_"))
rng = np.random.default_rng(42)
dates = pd.bdate_range("2019-01-02", "2020-12-31")
common = rng.normal(0.0, 0.008, len(dates))
series = []
for label in ("IDXA", "IDXB", "IDXC"):
    shocks = 0.7 * common + 0.3 * rng.normal(0.0, 0.008, len(dates))
    prices = 100.0 * np.exp(np.cumsum(shocks))
    lines = ["date,adj_close"]
    lines += [f"{d.date()},{p:.6f}" for d, p in zip(dates, prices)]
    path = out / f"{label}.csv"
    path.write_text("\n".join(lines) + "\n")
    series.append(load_price_csv(path, label=label))

panel = align_panel(series)
print("panel:", panel.values.shape[0], "days x", len(panel.labels), "indexes")

# One-month windows: one slice per calendar month of the sample.
slices_1m = window_slices(panel, 1)
print("\none-month windows:", len(slices_1m))
month, slc = slices_1m[6]
cloud = point_cloud(panel, slc)
print(f"window {month}: {cloud.points.shape[0]} days in R^{cloud.points.shape[1]}")

# Three-month windows with lookback padding: early months reach back before
# the sample start would allow, so the first full window anchors later.
slices_3m = window_slices(panel, 3, padding="lookback")
print("three-month windows:", len(slices_3m), "anchored", slices_3m[0][0], "to", slices_3m[-1][0])

# The distance matrix is plain Euclidean distance between day-vectors.
d = distance_matrix(cloud)
print("\ndistance matrix:", d.shape, "max pair distance", f"{d.max():.6f}")

# Distances ignore the level of returns, only their differences matter:
# translating every point by a constant vector changes nothing.
shifted = cloud.points + np.array([0.05, -0.02, 0.01])
print("translation invariant:", np.allclose(distance_matrix(shifted), d, atol=1e-12))

# Window volatility is the cross-index mean of per-index standard
# deviations over the same rows, geometric by default.
vol = window_volatility(panel, slc)
print(f"window volatility (geometric mean of per-index std): {vol:.6f}")
