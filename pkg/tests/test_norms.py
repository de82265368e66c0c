"""Diagram norms, monthly norm series, standardization."""

import math

import numpy as np
import pandas as pd
import pytest

from persnorm import (
    PersistenceDiagram,
    ReturnMatrix,
    build_norm_series,
    dim0_mst_oracle,
    distance_matrix,
    persistence_norm,
    point_cloud,
    rips_persistence,
    standardize,
    window_slices,
)
from persnorm.cloud import BURNIN, LOOKBACK
from persnorm.errors import GeometricUndefined, TooShort, ZeroVariance

SQUARE = distance_matrix(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float))


def diagram(pairs1=(), pairs0=()):
    return PersistenceDiagram.from_pairs(
        finite={0: np.asarray(pairs0, dtype=float).reshape(-1, 2),
                1: np.asarray(pairs1, dtype=float).reshape(-1, 2)},
        infinite={0: np.zeros(1), 1: np.empty(0)},
    )


def random_panel(seed=0, months=8, k=3, scale=0.01):
    rng = np.random.default_rng(seed)
    start = pd.Period("2018-01", freq="M")
    dates = pd.bdate_range(start.to_timestamp(), (start + months - 1).to_timestamp(how="end").normalize())
    return ReturnMatrix(
        dates=dates,
        values=scale * rng.standard_normal((len(dates), k)),
        labels=tuple(f"C{i}" for i in range(k)),
        dropped={},
    )


class TestPersistenceNorm:
    def test_direct_formula(self):
        diag = diagram(pairs1=[(0.0, 1.0), (0.0, 2.0)])
        assert persistence_norm(diag, dim=1, p=1) == 3.0
        assert persistence_norm(diag, dim=1, p=2) == pytest.approx(math.sqrt(5), abs=1e-15)

    def test_empty_diagram(self):
        diag = diagram()
        assert persistence_norm(diag, dim=1, p=1) == 0.0
        assert persistence_norm(diag, dim=1, p=2) == 0.0

    def test_unit_square_l1(self):
        diag = rips_persistence(SQUARE)
        assert persistence_norm(diag, dim=1, p=1) == pytest.approx(math.sqrt(2) - 1, abs=1e-12)

    def test_infinite_pairs_excluded(self):
        diag = rips_persistence(SQUARE, max_dim=1)  # cycles never die
        assert persistence_norm(diag, dim=1, p=1) == 0.0

    def test_dim0_l1_is_total_mst_weight(self):
        rng = np.random.default_rng(40)
        for _ in range(10):
            d = distance_matrix(rng.standard_normal((int(rng.integers(2, 25)), 4)))
            diag = rips_persistence(d)
            total = persistence_norm(diag, dim=0, p=1)
            assert total == pytest.approx(float(dim0_mst_oracle(d).sum()), rel=1e-12)

    def test_l2_at_most_l1(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            births = rng.uniform(0, 1, size=rng.integers(0, 6))
            pairs = [(b, b + rng.uniform(0, 2)) for b in births]
            diag = diagram(pairs1=pairs)
            l1 = persistence_norm(diag, dim=1, p=1)
            l2 = persistence_norm(diag, dim=1, p=2)
            assert l2 <= l1 + 1e-12
            if len(pairs) <= 1:
                assert l2 == pytest.approx(l1, abs=1e-15)


class TestBuildNormSeries:
    def test_months_match_slices(self):
        panel = random_panel(months=10)
        ns = build_norm_series(panel, 3, padding=BURNIN)
        anchors = [a for a, _ in window_slices(panel, 3, padding=BURNIN)]
        assert list(ns.months) == anchors
        assert ns.window_length_months == 3

    def test_lookback_covers_all_months(self):
        panel = random_panel(months=10)
        ns = build_norm_series(panel, 6, padding=LOOKBACK)
        assert len(ns.months) == 10

    def test_values_nonnegative_finite(self):
        ns = build_norm_series(random_panel(months=6), 2)
        for arr in (ns.l1, ns.l2, ns.sigma_bar):
            assert np.isfinite(arr).all() and (arr >= 0).all()
        assert (ns.l2 <= ns.l1 + 1e-12).all()

    def test_constant_panel_all_zero(self):
        # constant prices give exactly-zero returns
        panel = random_panel(months=4)
        flat = ReturnMatrix(
            dates=panel.dates,
            values=np.zeros_like(panel.values),
            labels=panel.labels,
            dropped={},
        )
        with pytest.warns(GeometricUndefined):
            ns = build_norm_series(flat, 1)
        assert (ns.l1 == 0).all() and (ns.l2 == 0).all() and (ns.sigma_bar == 0).all()

    def test_matches_manual_window(self):
        panel = random_panel(months=6, seed=8)
        ns = build_norm_series(panel, 3, padding=BURNIN)
        anchor, slc = window_slices(panel, 3, padding=BURNIN)[0]
        d = distance_matrix(point_cloud(panel, slc))
        diag = rips_persistence(d)
        i = list(ns.months).index(anchor)
        assert ns.l1[i] == persistence_norm(diag, dim=1, p=1)
        assert ns.l2[i] == persistence_norm(diag, dim=1, p=2)

    def test_homogeneity(self):
        panel = random_panel(months=5, seed=9)
        scaled = ReturnMatrix(
            dates=panel.dates, values=3.0 * panel.values, labels=panel.labels, dropped={},
        )
        a = build_norm_series(panel, 2)
        b = build_norm_series(scaled, 2)
        np.testing.assert_allclose(b.l1, 3.0 * a.l1, rtol=1e-9)
        np.testing.assert_allclose(b.l2, 3.0 * a.l2, rtol=1e-9)
        np.testing.assert_allclose(b.sigma_bar, 3.0 * a.sigma_bar, rtol=1e-9)

    def test_include_dim0(self):
        panel = random_panel(months=4, seed=10)
        ns = build_norm_series(panel, 1, include_dim0=True)
        anchor, slc = window_slices(panel, 1)[0]
        d = distance_matrix(point_cloud(panel, slc))
        assert ns.l1_dim0[0] == pytest.approx(float(dim0_mst_oracle(d).sum()), rel=1e-12)
        frame = ns.to_frame()
        assert "L01" in frame.columns and "L02" in frame.columns

    def test_norm_dim_zero(self):
        panel = random_panel(months=3, seed=11)
        ns = build_norm_series(panel, 1, norm_dim=0)
        assert ns.l1_name == "L01" and ns.l2_name == "L02"
        frame = ns.to_frame()
        assert list(frame.columns) == ["month", "window", "L01", "L02", "sigma_bar"]

    def test_to_frame_layout(self):
        ns = build_norm_series(random_panel(months=3, seed=12), 1)
        frame = ns.to_frame()
        assert list(frame.columns) == ["month", "window", "L11", "L12", "sigma_bar"]
        assert (frame["window"] == 1).all()
        assert frame["month"].iloc[0] == "2018-01"


class TestStandardize:
    def test_simple(self):
        np.testing.assert_allclose(standardize([1.0, 2.0, 3.0]), [-1.0, 0.0, 1.0], atol=1e-15)

    def test_two_points(self):
        got = standardize([0.0, 10.0])
        np.testing.assert_allclose(got, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)
        assert got[1] == pytest.approx(0.70711, abs=1e-5)

    def test_mean_zero_std_one(self):
        x = np.random.default_rng(13).uniform(-4, 9, size=200)
        z = standardize(x)
        assert z.mean() == pytest.approx(0.0, abs=1e-12)
        assert z.std(ddof=1) == pytest.approx(1.0, abs=1e-12)

    def test_idempotent(self):
        x = np.random.default_rng(14).standard_normal(50)
        z = standardize(x)
        np.testing.assert_allclose(standardize(z), z, atol=1e-12)

    def test_constant_vector(self):
        with pytest.raises(ZeroVariance):
            standardize([2.0, 2.0, 2.0])

    def test_too_short(self):
        with pytest.raises(TooShort):
            standardize([1.0])
