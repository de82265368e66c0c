"""Shared fixtures: synthetic markets on disk and in-memory return panels."""

from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

from persnorm import ReturnMatrix, distance_matrix, rips_persistence


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the jitted reducers once so timed tests measure the algorithm
    rng = np.random.default_rng(0)
    rips_persistence(distance_matrix(rng.standard_normal((4, 3))))


def _write_price_csv(path, dates, prices):
    lines = ["date,adj_close"]
    lines += [f"{d.date().isoformat()},{p:.6f}" for d, p in zip(dates, prices)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _correlated_walk(rng, dates, k, base_corr=0.7, scale=0.01):
    """Geometric random walks with correlated shocks and slow volatility cycles."""
    n = len(dates)
    corr = np.full((k, k), base_corr) + (1.0 - base_corr) * np.eye(k)
    shocks = rng.standard_normal((n, k)) @ np.linalg.cholesky(corr).T
    logv = np.zeros(n)
    eta = 0.12 * rng.standard_normal(n)
    for t in range(1, n):
        logv[t] = 0.97 * logv[t - 1] + eta[t]
    rets = shocks * (scale * np.exp(logv))[:, None]
    prices = 100.0 * np.exp(np.cumsum(rets, axis=0))
    return rets, prices


def _uncertainty_frame(rng, rets, dates, loadings):
    """AR(1) indexes tied to realized monthly volatility so regressions have signal."""
    months = dates.to_period("M")
    frame = pd.DataFrame(rets, index=dates)
    monthly_std = frame.groupby(months).std(ddof=1)
    sig = np.exp(np.log(monthly_std).mean(axis=1)).to_numpy()
    z = (sig - sig.mean()) / sig.std(ddof=1)
    m = len(z)
    out = {}
    for name, (level, load, rho) in loadings.items():
        ar = np.zeros(m)
        eps = rng.standard_normal(m)
        for t in range(1, m):
            ar[t] = rho * ar[t - 1] + eps[t]
        ar = (ar - ar.mean()) / ar.std(ddof=1)
        out[name] = level * (1.0 + 0.25 * (load * z + (1.0 - load) * ar))
    return pd.DataFrame(out, index=monthly_std.index)


def _write_uncertainty_csv(path, frame):
    lines = ["month," + ",".join(frame.columns)]
    for period, row in frame.iterrows():
        cells = ["" if not np.isfinite(v) else f"{v:.6f}" for v in row]
        lines.append(f"{period},{','.join(cells)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture(scope="session")
def market_dir(tmp_path_factory):
    """Full-scale synthetic market: 4 indexes 1993-01-04..2021-06-28, 342 months."""
    root = tmp_path_factory.mktemp("market")
    rng = np.random.default_rng(20210628)
    dates = pd.bdate_range("1993-01-04", "2021-06-28")
    rets, prices = _correlated_walk(rng, dates, k=4)
    labels = ("IDX1", "IDX2", "IDX3", "IDX4")
    for j, label in enumerate(labels):
        _write_price_csv(root / f"{label}.csv", dates, prices[:, j])
    unc = _uncertainty_frame(
        rng, rets, dates,
        {"FIN1": (0.9, 0.65, 0.85), "MAC1": (0.65, 0.45, 0.8)},
    )
    _write_uncertainty_csv(root / "uncertainty.csv", unc)
    return {"root": root, "labels": labels, "uncertainty": root / "uncertainty.csv"}


@pytest.fixture(scope="session")
def small_market_dir(tmp_path_factory):
    """Quick 2-index market, 2005-01..2007-12, for pipeline and CLI tests."""
    root = tmp_path_factory.mktemp("small_market")
    rng = np.random.default_rng(7)
    dates = pd.bdate_range("2005-01-03", "2007-12-31")
    rets, prices = _correlated_walk(rng, dates, k=2)
    labels = ("AAA", "BBB")
    for j, label in enumerate(labels):
        _write_price_csv(root / f"{label}.csv", dates, prices[:, j])
    unc = _uncertainty_frame(
        rng, rets, dates,
        {"FIN1": (0.9, 0.6, 0.85), "MAC1": (0.65, 0.4, 0.8), "REA1": (0.8, 0.3, 0.75)},
    )
    unc.iloc[5, 2] = np.nan
    _write_uncertainty_csv(root / "uncertainty.csv", unc)
    return {"root": root, "labels": labels, "uncertainty": root / "uncertainty.csv"}


@pytest.fixture
def panel_factory():
    """Build an in-memory ReturnMatrix of given length directly from draws."""

    def make(seed=0, start="2019-01-01", periods=130, k=3, scale=0.01):
        rng = np.random.default_rng(seed)
        dates = pd.bdate_range(start, periods=periods)
        values = scale * rng.standard_normal((periods, k))
        labels = tuple(f"C{i}" for i in range(k))
        return ReturnMatrix(
            dates=dates, values=values, labels=labels,
            dropped={label: 0 for label in labels},
        )

    return make
