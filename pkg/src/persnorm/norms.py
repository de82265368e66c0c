"""Scalar persistence norms, the rolling monthly norm series, standardization.

The L1 norm of a diagram dimension is the sum of finite lifetimes; the L2
norm is the square root of the sum of squared finite lifetimes. Infinite
features are excluded. The series builder runs window -> cloud -> distances
-> persistence -> norms + volatility for every anchor month and keys each
value by the window's ending month, so it is contemporaneous with that
month's uncertainty reading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .cloud import LOOKBACK, distance_matrix, point_cloud, window_slices, window_volatility, WindowSpec
from .errors import TooShort, ZeroVariance
from .ingest import ReturnMatrix
from .persistence import PersistenceDiagram, rips_persistence


def persistence_norm(diagram: PersistenceDiagram, dim: int = 1, p: int = 1) -> float:
    """L1 (p=1) or L2 (p=2) norm of the finite pairs in one dimension."""
    if dim not in (0, 1):
        raise TooShort(f"dim must be 0 or 1, got {dim}")
    if p not in (1, 2):
        raise TooShort(f"p must be 1 or 2, got {p}")
    pairs = diagram.finite_pairs(dim)
    if pairs.size == 0:
        return 0.0
    lifetimes = pairs[:, 1] - pairs[:, 0]
    if p == 1:
        return float(lifetimes.sum())
    return float(np.sqrt((lifetimes * lifetimes).sum()))


@dataclass(frozen=True)
class NormSeries:
    """Monthly persistence norms and volatility for one window length.

    ``l1``/``l2`` hold the norms at ``norm_dim`` (column names L11/L12 for
    the default dimension 1); optional dimension-0 diagnostics ride along.
    """

    window_length_months: int
    months: pd.PeriodIndex
    norm_dim: int
    l1: np.ndarray
    l2: np.ndarray
    sigma_bar: np.ndarray
    l1_dim0: np.ndarray | None = None
    l2_dim0: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.months)
        for name in ("l1", "l2", "sigma_bar"):
            arr = getattr(self, name)
            if len(arr) != n:
                raise TooShort(f"{name} has {len(arr)} values for {n} months")
            if not np.isfinite(arr).all() or (arr < 0).any():
                raise ZeroVariance(f"{name} contains negative or non-finite values")

    @property
    def l1_name(self) -> str:
        return f"L{self.norm_dim}1"

    @property
    def l2_name(self) -> str:
        return f"L{self.norm_dim}2"

    def to_frame(self) -> pd.DataFrame:
        """Columns month, window, L<dim>1, L<dim>2, sigma_bar (+ dim-0 extras)."""
        data = {
            "month": self.months.astype(str),
            "window": np.full(len(self.months), self.window_length_months, dtype=int),
            self.l1_name: self.l1,
            self.l2_name: self.l2,
            "sigma_bar": self.sigma_bar,
        }
        if self.l1_dim0 is not None:
            data["L01"] = self.l1_dim0
        if self.l2_dim0 is not None:
            data["L02"] = self.l2_dim0
        return pd.DataFrame(data)

    def __len__(self) -> int:
        return len(self.months)


def build_norm_series(
    panel: ReturnMatrix,
    length_months: int,
    *,
    padding: str = LOOKBACK,
    vol_mean: str = "geometric",
    norm_dim: int = 1,
    include_dim0: bool = False,
    threshold: float | None = None,
) -> NormSeries:
    """Norms and volatility for every anchor month at one window length.

    ``threshold=None`` truncates each window's filtration at its own
    enclosing radius, which keeps every reported dimension-1 feature finite.
    """
    slices = window_slices(panel, length_months, padding=padding)
    months = pd.PeriodIndex([anchor for anchor, _ in slices], freq="M")
    n = len(slices)
    l1 = np.empty(n)
    l2 = np.empty(n)
    sig = np.empty(n)
    l1d0 = np.empty(n) if include_dim0 else None
    l2d0 = np.empty(n) if include_dim0 else None
    for t, (anchor, slc) in enumerate(slices):
        spec = WindowSpec(length_months=length_months, anchor_month=anchor)
        cloud = point_cloud(panel, slc, window=spec)
        dmat = distance_matrix(cloud)
        diagram = rips_persistence(dmat, threshold=threshold)
        l1[t] = persistence_norm(diagram, dim=norm_dim, p=1)
        l2[t] = persistence_norm(diagram, dim=norm_dim, p=2)
        sig[t] = window_volatility(panel, slc, mean_kind=vol_mean)
        if include_dim0:
            l1d0[t] = persistence_norm(diagram, dim=0, p=1)
            l2d0[t] = persistence_norm(diagram, dim=0, p=2)
    return NormSeries(
        window_length_months=length_months,
        months=months,
        norm_dim=norm_dim,
        l1=l1,
        l2=l2,
        sigma_bar=sig,
        l1_dim0=l1d0,
        l2_dim0=l2d0,
    )


def standardize(series) -> np.ndarray:
    """Subtract the mean and divide by the sample (n-1) standard deviation."""
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise TooShort(f"standardize expects a vector, got shape {x.shape}")
    if len(x) < 2:
        raise TooShort(f"standardize needs >= 2 values, got {len(x)}")
    sd = x.std(ddof=1)
    if sd == 0.0 or not np.isfinite(sd):
        raise ZeroVariance("cannot standardize a constant vector")
    return (x - x.mean()) / sd
