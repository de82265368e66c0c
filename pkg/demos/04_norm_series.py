"""
Monthly persistence-norm series
================================

Each monthly point cloud reduces to two numbers: the L1 and L2 norms of
its dim-1 persistence diagram (the summed and root-summed-squared
lifetimes of the loops).  Alongside window volatility they form the
monthly series everything downstream consumes.
"""

import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

from persnorm import (
    ReturnMatrix,
    align_panel,
    build_norm_series,
    distance_matrix,
    load_price_csv,
    persistence_norm,
    rips_persistence,
    standardize,
)

out = Path(tempfile.mkdtemp(prefix="persnorm_demo_"))
rng = np.random.default_rng(3)
dates = pd.bdate_range("2018-01-02", "2020-12-31")
common = rng.normal(0.0, 0.009, len(dates))
series = []
for label in ("IDXA", "IDXB", "IDXC", "IDXD"):
    shocks = 0.6 * common + 0.4 * rng.normal(0.0, 0.009, len(dates))
    prices = 100.0 * np.exp(np.cumsum(shocks))
    path = out / f"{label}.csv"
    path.write_text(
        "date,adj_close\n"
        + "\n".join(f"{d.date()},{p:.6f}" for d, p in zip(dates, prices))
        + "\n"
    )
    series.append(load_price_csv(path, label=label))
panel = align_panel(series)

# persistence_norm sums lifetimes (p=1) or root-sums their squares (p=2).
square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
diagram = rips_persistence(distance_matrix(square))
print("unit square L1:", persistence_norm(diagram, dim=1, p=1))
print("unit square L2:", persistence_norm(diagram, dim=1, p=2))

# One series per window length.  A month's three-month cloud uses that
# month plus the two before it, so norms at different lengths are
# directly comparable month by month.
norms = {w: build_norm_series(panel, w) for w in (1, 3)}
frame = norms[1].to_frame()
print("\none-month series, first rows:")
print(frame.head(4).to_string(index=False))
print("months covered:", frame["month"].iloc[0], "to", frame["month"].iloc[-1], f"({len(frame)} rows)")

# The L2 norm never exceeds the L1 norm, with equality only when a
# diagram has at most one off-diagonal point.
assert np.all(norms[1].l2 <= norms[1].l1 + 1e-15)
print("\nmax L2/L1 ratio over the sample:", f"{np.max(norms[1].l2 / norms[1].l1):.4f}")

# Norms scale linearly with returns: doubling every return doubles every
# lifetime, hence both norms and the volatility.
doubled = ReturnMatrix(dates=panel.dates, values=panel.values * 2.0, labels=panel.labels, dropped=panel.dropped)
norms2 = build_norm_series(doubled, 1)
print("homogeneity check:", np.allclose(norms2.l1, 2.0 * norms[1].l1, rtol=1e-9))

# Standardizing gives the zero-mean unit-variance series used in overlay
# plots and correlation tables.
z = standardize(norms[1].l1)
print("standardized L1: mean", f"{z.mean():+.2e}", "std", f"{z.std(ddof=1):.6f}")
