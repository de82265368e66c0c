"""
The full pipeline, as a library call and from the command line
===============================================================

Price CSVs plus one uncertainty CSV in, a manifest of deterministic
tables out: norm series per window, correlation tables, the regression
battery, split regressions, and standardized overlay series.
"""

import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

from persnorm import build_config, run_pipeline
from persnorm.cli import main

root = Path(tempfile.mkdtemp(prefix="persnorm_demo_"))
data = root / "data"
data.mkdir()
rng = np.random.default_rng(5)
dates = pd.bdate_range("2015-01-02", "2019-12-31")

# Three correlated index price files.
common = rng.normal(0.0, 0.009, len(dates))
for label in ("IDXA", "IDXB", "IDXC"):
    shocks = 0.6 * common + 0.4 * rng.normal(0.0, 0.009, len(dates))
    prices = 100.0 * np.exp(np.cumsum(shocks))
    (data / f"{label}.csv").write_text(
        "date,adj_close\n"
        + "\n".join(f"{d.date()},{p:.6f}" for d, p in zip(dates, prices))
        + "\n"
    )

# One monthly uncertainty file whose single column tracks realized
# volatility with noise, so the downstream fits have something to find.
months = pd.period_range(dates[0], dates[-1], freq="M")
rets = pd.DataFrame(common, index=dates)
monthly_vol = rets.groupby(dates.to_period("M")).std().iloc[:, 0].to_numpy()
z = (monthly_vol - monthly_vol.mean()) / monthly_vol.std()
unc = 100.0 * (1.0 + 0.25 * (0.8 * z + 0.2 * rng.normal(0.0, 1.0, len(months))))
(data / "uncertainty.csv").write_text(
    "month,UNC1\n"
    + "\n".join(f"{m},{v:.6f}" for m, v in zip(months, unc))
    + "\n"
)

# Library route: a config object, then one call per subcommand's worth of
# work.  "report" runs every stage.
config = build_config(overrides={
    "prices": tuple((label, data / f"{label}.csv") for label in ("IDXA", "IDXB", "IDXC")),
    "uncertainty": data / "uncertainty.csv",
    "windows": (1, 3),
    "out": root / "out_lib",
})
result = run_pipeline(config, command="report")
print("files written:", len(result["files"]))
for entry in result["files"]:
    print(f"   {entry['path']}  ({entry['bytes']} bytes, sha256 {entry['sha256'][:12]}...)")

norms = pd.read_csv(root / "out_lib" / "norms_1m.csv")
print("\nnorms_1m.csv, first rows:")
print(norms.head(3).to_string(index=False))

battery = pd.read_csv(root / "out_lib" / "regressions_norms.csv")
print("\nbattery rows:", len(battery), " models:", sorted(int(m) for m in battery["model"].unique()))

# Command-line route: the same run driven by a flat key = value config
# file.  Per-index price files use price.LABEL keys.
cfg = root / "run.cfg"
cfg.write_text(
    f"price.IDXA = {data / 'IDXA.csv'}\n"
    f"price.IDXB = {data / 'IDXB.csv'}\n"
    f"price.IDXC = {data / 'IDXC.csv'}\n"
    f"uncertainty = {data / 'uncertainty.csv'}\n"
    "windows = 1,3\n"
    f"out = {root / 'out_cli'}\n"
)
print("\n$ persnorm report --config run.cfg")
code = main(["report", "--config", str(cfg)])
print("exit code:", code)

# Identical inputs produce byte-identical outputs, manifest checksums
# included.
a = (root / "out_lib" / "manifest.json").read_bytes()
b = (root / "out_cli" / "manifest.json").read_bytes()
print("library and CLI manifests identical:", a == b)
