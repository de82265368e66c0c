"""
Loading price files and aligning a return panel
================================================

Two daily price CSVs with mismatched holiday calendars become a single
log-return matrix on the common trading days.
"""

import tempfile
from pathlib import Path

import numpy as np

from persnorm import align_panel, load_price_csv, log_returns

out = Path(tempfile.mkdtemp(prefix="persnorm_demo_"))

# Index A trades every weekday of the stretch; index B observes an extra
# holiday on the 6th.  Prices are simple geometric walks.
rng = np.random.default_rng(7)
days_a = ["2021-01-04", "2021-01-05", "2021-01-06", "2021-01-07", "2021-01-08"]
days_b = ["2021-01-04", "2021-01-05", "2021-01-07", "2021-01-08"]

for label, days in [("IDXA", days_a), ("IDXB", days_b)]:
    prices = 100.0 * np.exp(np.cumsum(rng.normal(0.0, 0.01, len(days))))
    lines = ["date,adj_close"]
    lines += [f"{d},{p:.6f}" for d, p in zip(days, prices)]
    (out / f"{label}.csv").write_text("\n".join(lines) + "\n")

series_a = load_price_csv(out / "IDXA.csv", label="IDXA")
series_b = load_price_csv(out / "IDXB.csv", label="IDXB")
print("IDXA days:", len(series_a.dates), "IDXB days:", len(series_b.dates))

# A single series turns into log returns dated by the later day of each
# consecutive pair.
rets_a = log_returns(series_a)
print("\nIDXA log returns:")
print(rets_a.to_string(float_format="{:+.6f}".format))

# Aligning intersects the calendars first, then differences, so the return
# over B's holiday gap spans the missing day instead of being dropped.
panel = align_panel([series_a, series_b])
print("\naligned labels:", panel.labels)
print("aligned return dates:", [str(d.date()) for d in panel.dates])
print("rows dropped per index:", panel.dropped)

gap_row = panel.values[1]
direct = np.log(series_b.prices[2] / series_b.prices[1])
print(f"\nIDXB return spanning the holiday: {gap_row[1]:+.6f}")
print(f"ln(p_thu / p_tue) computed by hand: {direct:+.6f}")
