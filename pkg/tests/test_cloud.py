"""Window slicing, point clouds, distances, window volatility."""

import math

import numpy as np
import pandas as pd
import pytest

from persnorm import (
    ReturnMatrix,
    distance_matrix,
    point_cloud,
    validate_distance_matrix,
    window_slices,
    window_volatility,
)
from persnorm.cloud import BURNIN, LOOKBACK
from persnorm.errors import EmptySlice, GeometricUndefined, MalformedRow, NoFullWindow, TooShort


def panel_over(start, months, k=2, seed=0, scale=0.01):
    last = pd.Period(start, freq="M") + months - 1
    dates = pd.bdate_range(pd.Period(start, freq="M").to_timestamp(), last.to_timestamp(how="end").normalize())
    rng = np.random.default_rng(seed)
    values = scale * rng.standard_normal((len(dates), k))
    return ReturnMatrix(
        dates=dates,
        values=values,
        labels=tuple(f"C{i}" for i in range(k)),
        dropped={},
    )


class TestWindowSlices:
    def test_burnin_24_months_length_12(self):
        panel = panel_over("2019-01", 24)
        slices = window_slices(panel, 12, padding=BURNIN)
        assert len(slices) == 13
        anchors = [a for a, _ in slices]
        assert anchors[0] == pd.Period("2019-12", freq="M")
        assert anchors[-1] == pd.Period("2020-12", freq="M")

    def test_lookback_covers_every_month(self):
        panel = panel_over("2019-01", 24)
        slices = window_slices(panel, 12, padding=LOOKBACK)
        assert len(slices) == 24
        assert [a for a, _ in slices] == list(pd.period_range("2019-01", "2020-12", freq="M"))

    def test_length_one_is_per_month(self):
        panel = panel_over("2019-01", 7)
        for padding in (BURNIN, LOOKBACK):
            slices = window_slices(panel, 1, padding=padding)
            assert len(slices) == 7

    def test_slice_rows_match_window_months(self):
        panel = panel_over("2019-01", 8)
        months = panel.month_periods()
        for anchor, slc in window_slices(panel, 3, padding=BURNIN):
            got = months[slc]
            assert got.max() == anchor
            assert got.min() == anchor - 2
            # rows outside the slice are outside the window
            inside = (months >= anchor - 2) & (months <= anchor)
            assert inside.sum() == slc.stop - slc.start

    def test_lookback_truncates_early_windows(self):
        panel = panel_over("2019-01", 6)
        slices = dict(window_slices(panel, 12, padding=LOOKBACK))
        first = slices[pd.Period("2019-01", freq="M")]
        months = panel.month_periods()[first]
        assert months.min() == months.max() == pd.Period("2019-01", freq="M")

    def test_no_full_window(self):
        panel = panel_over("2019-01", 3)
        with pytest.raises(NoFullWindow):
            window_slices(panel, 6, padding=BURNIN)

    def test_bad_padding_name(self):
        panel = panel_over("2019-01", 3)
        with pytest.raises(MalformedRow):
            window_slices(panel, 1, padding="center")


class TestPointCloud:
    def test_one_point_per_day(self):
        panel = panel_over("2019-01", 1, k=4)
        [(anchor, slc)] = window_slices(panel, 1, padding=BURNIN)
        cloud = point_cloud(panel, slc)
        assert cloud.points.shape == (slc.stop - slc.start, 4)
        np.testing.assert_array_equal(cloud.points, panel.values[slc])

    def test_two_day_slice(self):
        panel = panel_over("2019-01", 1)
        cloud = point_cloud(panel, slice(0, 2))
        assert cloud.n == 2

    def test_empty_slice(self):
        panel = panel_over("2019-01", 1)
        with pytest.raises(EmptySlice):
            point_cloud(panel, slice(3, 3))


class TestDistanceMatrix:
    def test_three_four_five(self):
        pts = np.array([[0.0, 0.0, 0.0, 0.0], [3.0, 4.0, 0.0, 0.0]])
        d = distance_matrix(pts)
        assert d[0, 1] == 5.0
        assert d[1, 0] == 5.0
        assert d[0, 0] == d[1, 1] == 0.0

    def test_identical_points(self):
        d = distance_matrix(np.ones((3, 2)))
        np.testing.assert_array_equal(d, np.zeros((3, 3)))

    def test_unit_square_values(self):
        pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
        d = distance_matrix(pts)
        off = np.sort(d[np.triu_indices(4, k=1)])
        np.testing.assert_allclose(off, [1, 1, 1, 1, math.sqrt(2), math.sqrt(2)], atol=1e-15)

    def test_one_dimensional_is_absolute_difference(self):
        x = np.array([[0.3], [-1.2], [4.0]])
        d = distance_matrix(x)
        for i in range(3):
            for j in range(3):
                assert d[i, j] == abs(x[i, 0] - x[j, 0])

    def test_translation_and_axis_permutation(self):
        rng = np.random.default_rng(11)
        pts = rng.standard_normal((20, 4))
        d = distance_matrix(pts)
        np.testing.assert_allclose(distance_matrix(pts + rng.standard_normal(4)), d, rtol=1e-9)
        np.testing.assert_allclose(distance_matrix(pts[:, [2, 0, 3, 1]]), d, rtol=1e-12)

    def test_scaling(self):
        rng = np.random.default_rng(12)
        pts = rng.standard_normal((15, 3))
        d = distance_matrix(pts)
        np.testing.assert_array_equal(distance_matrix(2.0 * pts), 2.0 * d)
        np.testing.assert_allclose(distance_matrix(3.0 * pts), 3.0 * d, rtol=1e-12)

    def test_validate_rejects_bad_matrices(self):
        good = distance_matrix(np.random.default_rng(1).standard_normal((6, 2)))
        validate_distance_matrix(good)
        bad = good.copy()
        bad[0, 0] = 0.5
        with pytest.raises(MalformedRow):
            validate_distance_matrix(bad)
        bad = good.copy()
        bad[0, 1] = bad[1, 0] + 1e-6
        with pytest.raises(MalformedRow):
            validate_distance_matrix(bad)
        bad = good.copy()
        bad[0, 1] = bad[1, 0] = good.max() * 10  # breaks the triangle inequality
        with pytest.raises(MalformedRow):
            validate_distance_matrix(bad)


class TestWindowVolatility:
    def panel_from(self, cols):
        values = np.column_stack(cols).astype(float)
        dates = pd.bdate_range("2019-01-01", periods=values.shape[0])
        return ReturnMatrix(
            dates=dates,
            values=values,
            labels=tuple(f"C{i}" for i in range(values.shape[1])),
            dropped={},
        )

    def test_hand_computed_geometric_mean(self):
        panel = self.panel_from([[0.01, -0.01], [0.02, -0.02]])
        sig = window_volatility(panel, slice(0, 2), mean_kind="geometric")
        assert sig == pytest.approx(0.02, abs=1e-12)

    def test_identical_columns_collapse(self):
        col = [0.01, -0.03, 0.02, 0.005]
        panel = self.panel_from([col, col, col, col])
        expect = np.std(col, ddof=1)
        for kind in ("geometric", "arithmetic"):
            assert window_volatility(panel, slice(0, 4), mean_kind=kind) == pytest.approx(expect, rel=1e-12)

    def test_constant_column_geometric_zero(self):
        panel = self.panel_from([[0.01, -0.01, 0.02], [0.0, 0.0, 0.0]])
        with pytest.warns(GeometricUndefined):
            sig = window_volatility(panel, slice(0, 3), mean_kind="geometric")
        assert sig == 0.0

    def test_arithmetic_mean(self):
        panel = self.panel_from([[0.01, -0.01], [0.02, -0.02]])
        stds = (math.sqrt(2) * 0.01, math.sqrt(2) * 0.02)
        sig = window_volatility(panel, slice(0, 2), mean_kind="arithmetic")
        assert sig == pytest.approx(sum(stds) / 2, rel=1e-12)

    def test_too_short(self):
        panel = self.panel_from([[0.01, -0.01], [0.02, -0.02]])
        with pytest.raises(TooShort):
            window_volatility(panel, slice(0, 1))

    def test_scaling(self):
        rng = np.random.default_rng(9)
        vals = 0.01 * rng.standard_normal((30, 4))
        a = self.panel_from(list(vals.T))
        b = self.panel_from(list((3.0 * vals).T))
        sa = window_volatility(a, slice(0, 30))
        sb = window_volatility(b, slice(0, 30))
        assert sb == pytest.approx(3.0 * sa, rel=1e-12)
