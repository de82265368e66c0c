"""Correlation tables, OLS with Newey-West inference, splits, model battery.

The battery mirrors the study design: contemporaneous monthly regressions of
persistence norms on an uncertainty index and window volatility (models 1-3),
the reverse direction (models 4-6), the same with the L2 norm (models 12-62),
and models 4-6 re-run on high/low subsamples split at the uncertainty
median. Standard errors use the Bartlett-kernel HAC sandwich; the automatic
lag is floor(4 * (n/100)^(2/9)) and is recomputed on subsample sizes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import (
    LengthMismatch,
    MisalignedMonths,
    PerfectFitWarning,
    RankDeficient,
    TooFewObservations,
    ZeroVariance,
)
from .ingest import UncertaintySeries
from .norms import NormSeries

FULL_SAMPLE = "full"


def _vec(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise LengthMismatch(f"{name} must be a vector, got shape {arr.shape}")
    return arr


def pearson(x, y) -> float:
    """Sample Pearson correlation."""
    xv = _vec(x, "x")
    yv = _vec(y, "y")
    if len(xv) != len(yv):
        raise LengthMismatch(f"lengths differ: {len(xv)} vs {len(yv)}")
    if len(xv) < 2:
        raise TooFewObservations("correlation needs >= 2 observations")
    xd = xv - xv.mean()
    yd = yv - yv.mean()
    sxx = float(xd @ xd)
    syy = float(yd @ yd)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("correlation of a constant vector is undefined")
    return float((xd @ yd) / math.sqrt(sxx * syy))


def average_ranks(x) -> np.ndarray:
    """1-based ranks; tied values share the mean of their rank range."""
    xv = _vec(x, "x")
    n = len(xv)
    order = np.argsort(xv, kind="mergesort")
    ranks = np.empty(n, dtype=float)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and xv[order[j + 1]] == xv[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation of average-ranked data."""
    return pearson(average_ranks(x), average_ranks(y))


@dataclass(frozen=True)
class CorrelationMatrix:
    """Square table: Pearson below the diagonal, Spearman above, ones on it."""

    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        k = len(self.names)
        if self.values.shape != (k, k):
            raise LengthMismatch(f"matrix shape {self.values.shape} for {k} names")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=list(self.names), columns=list(self.names))


def correlation_table(variables) -> CorrelationMatrix:
    """Build the dual-triangle correlation table from named vectors.

    ``variables`` is a DataFrame or a name -> vector mapping. Rows with a
    missing value in either member of a pair are dropped for that pair.
    """
    if isinstance(variables, pd.DataFrame):
        names = tuple(str(c) for c in variables.columns)
        cols = [variables[c].to_numpy(dtype=float) for c in variables.columns]
    else:
        names = tuple(variables.keys())
        cols = [_vec(v, n) for n, v in variables.items()]
    k = len(names)
    if k == 0:
        raise LengthMismatch("no variables supplied")
    lengths = {len(c) for c in cols}
    if len(lengths) != 1:
        raise LengthMismatch(f"variables differ in length: {sorted(lengths)}")
    out = np.eye(k)
    for a in range(k):
        for b in range(a + 1, k):
            ok = np.isfinite(cols[a]) & np.isfinite(cols[b])
            xa, xb = cols[a][ok], cols[b][ok]
            out[b, a] = np.clip(pearson(xa, xb), -1.0, 1.0)
            out[a, b] = np.clip(spearman(xa, xb), -1.0, 1.0)
    return CorrelationMatrix(names=names, values=out)


def newey_west_auto_lag(n: int) -> int:
    """The standard plug-in rule floor(4 * (n/100)^(2/9))."""
    if n < 1:
        raise TooFewObservations("lag rule needs n >= 1")
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


@dataclass(frozen=True)
class RegressionSpec:
    """What to regress: dependent, regressors (constant implied), sample, lag."""

    dependent: str
    regressors: tuple[str, ...]
    sample: str = FULL_SAMPLE
    nw_lag: int | str = "auto"

    def __post_init__(self):
        if len(set(self.regressors)) != len(self.regressors):
            raise RankDeficient(f"duplicate regressor in {self.regressors}")


@dataclass(frozen=True)
class RegressionResult:
    """Fitted coefficients with HAC t-statistics.

    ``names`` starts with "const"; ``se`` of an exact fit is 0 and the
    matching t-statistic is +/-inf (flagged with PerfectFitWarning).
    """

    names: tuple[str, ...]
    beta: np.ndarray
    se: np.ndarray
    t: np.ndarray
    nw_lag: int
    r2: float
    adjusted_r2: float
    n: int

    def __post_init__(self):
        if self.n <= len(self.names):
            raise TooFewObservations(f"n={self.n} with {len(self.names)} coefficients")
        if self.adjusted_r2 > 1.0 + 1e-12:
            raise ZeroVariance(f"adjusted R^2 {self.adjusted_r2} exceeds 1")

    def coef(self, name: str) -> float:
        return float(self.beta[self.names.index(name)])

    def tstat(self, name: str) -> float:
        return float(self.t[self.names.index(name)])


def ols_newey_west(
    y,
    X,
    nw_lag: int | str = "auto",
    *,
    names: tuple[str, ...] | None = None,
    dof_correction: bool = False,
) -> RegressionResult:
    """OLS with Bartlett-kernel HAC standard errors; constant prepended.

    ``X`` is a DataFrame, a name -> vector mapping, or a 2-D array with
    ``names``. ``nw_lag="auto"`` applies the plug-in rule; lag 0 degenerates
    to the heteroskedasticity-only (White) sandwich. ``dof_correction``
    multiplies the meat by n/(n-k), off by default.
    """
    yv = _vec(y, "y")
    if isinstance(X, pd.DataFrame):
        reg_names = tuple(str(c) for c in X.columns)
        mat = X.to_numpy(dtype=float)
    elif isinstance(X, dict):
        reg_names = tuple(X.keys())
        mat = np.column_stack([_vec(v, n) for n, v in X.items()]) if X else np.empty((len(yv), 0))
    else:
        mat = np.asarray(X, dtype=float)
        if mat.ndim == 1:
            mat = mat[:, None]
        reg_names = tuple(names) if names is not None else tuple(f"x{i}" for i in range(mat.shape[1]))
    if mat.shape[1] != len(reg_names):
        raise LengthMismatch(f"{mat.shape[1]} regressor columns for {len(reg_names)} names")
    n = len(yv)
    if mat.shape[0] != n:
        raise LengthMismatch(f"y has {n} rows, X has {mat.shape[0]}")
    if not (np.isfinite(yv).all() and np.isfinite(mat).all()):
        raise TooFewObservations("regression inputs contain missing or non-finite values")
    Xf = np.column_stack([np.ones(n), mat])
    all_names = ("const",) + reg_names
    k = Xf.shape[1]
    if n <= k + 1:
        raise TooFewObservations(f"n={n} too small for {k} coefficients")
    if len(set(all_names)) != k:
        raise RankDeficient(f"duplicate regressor names in {all_names}")

    beta, _, rank, _ = np.linalg.lstsq(Xf, yv, rcond=None)
    if rank < k:
        raise RankDeficient(f"regressor matrix has rank {rank} < {k}")
    resid = yv - Xf @ beta

    if nw_lag == "auto":
        lag = newey_west_auto_lag(n)
    else:
        lag = int(nw_lag)
        if lag < 0 or lag >= n:
            raise TooFewObservations(f"nw_lag {lag} outside 0..{n - 1}")

    sse = float(resid @ resid)
    ym = yv - yv.mean()
    sst = float(ym @ ym)
    # residual norm below 1e-12 of the dependent's scale counts as an exact fit
    perfect = sse <= 1e-24 * max(sst, float(yv @ yv), 1e-300)

    u = Xf * resid[:, None]
    S = u.T @ u
    for ell in range(1, lag + 1):
        wgt = 1.0 - ell / (lag + 1.0)
        gamma = u[ell:].T @ u[:-ell]
        S += wgt * (gamma + gamma.T)
    if dof_correction:
        S *= n / (n - k)
    xtx_inv = np.linalg.inv(Xf.T @ Xf)
    cov = xtx_inv @ S @ xtx_inv
    var = np.diag(cov).copy()
    var[var < 0] = 0.0
    se = np.sqrt(var)

    if perfect:
        warnings.warn(
            "residuals are zero to machine precision; standard errors degenerate",
            PerfectFitWarning,
            stacklevel=2,
        )
        se = np.zeros(k)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / se, np.where(beta == 0, 0.0, np.sign(beta) * np.inf))

    if perfect:
        r2 = 1.0
    elif sst == 0.0:
        r2 = 0.0
    else:
        r2 = 1.0 - sse / sst
    p = k - 1
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1)
    return RegressionResult(
        names=all_names,
        beta=beta,
        se=se,
        t=t,
        nw_lag=lag,
        r2=r2,
        adjusted_r2=adj,
        n=n,
    )


def median_split(series) -> tuple[np.ndarray, np.ndarray]:
    """Rank-based (high, low) index sets; ties broken by position, earlier -> low."""
    x = _vec(series, "series")
    n = len(x)
    if n < 2:
        raise TooFewObservations("median split needs >= 2 observations")
    order = np.argsort(x, kind="mergesort")
    low = np.sort(order[: n // 2])
    high = np.sort(order[n // 2 :])
    return high, low


# --- the model battery -------------------------------------------------------

# model number -> (dependent role, regressor roles)
_NORM_MODELS = {1: ("norm", ("uncertainty",)), 2: ("norm", ("sigma_bar",)), 3: ("norm", ("uncertainty", "sigma_bar"))}
_UNC_MODELS = {4: ("uncertainty", ("norm",)), 5: ("uncertainty", ("sigma_bar",)), 6: ("uncertainty", ("norm", "sigma_bar"))}

BATTERY_NORMS = "norms"
BATTERY_UNCERTAINTY = "uncertainty"
BATTERY_SPLIT = "split"


@dataclass(frozen=True)
class BatteryRow:
    """One fitted cell of the battery, flattened for table output."""

    model: int
    norm: str
    uncertainty: str
    window: int
    sample: str
    n: int
    nw_lag: int
    adj_r2: float
    coef_const: float
    t_const: float
    coef_uncertainty: float | None = None
    t_uncertainty: float | None = None
    coef_norm: float | None = None
    t_norm: float | None = None
    coef_sigma_bar: float | None = None
    t_sigma_bar: float | None = None


def _aligned_frame(norm_series: NormSeries, unc: UncertaintySeries, column: str) -> pd.DataFrame:
    if column not in unc.columns:
        raise MisalignedMonths(f"uncertainty column {column!r} not in {unc.columns}")
    nf = pd.DataFrame(
        {
            "norm_l1": norm_series.l1,
            "norm_l2": norm_series.l2,
            "sigma_bar": norm_series.sigma_bar,
        },
        index=norm_series.months,
    )
    uf = unc.data[[column]].rename(columns={column: "uncertainty"})
    joined = nf.join(uf, how="inner")
    joined = joined.dropna()
    if joined.empty:
        raise MisalignedMonths(
            f"no overlapping months between {norm_series.window_length_months}m norms and {column}"
        )
    return joined


def _fit_cell(
    frame: pd.DataFrame,
    model: int,
    use_l2: bool,
    norm_label: str,
    column: str,
    window: int,
    sample: str,
    nw_lag,
    dof_correction: bool,
) -> BatteryRow:
    base = _NORM_MODELS if model in _NORM_MODELS else _UNC_MODELS
    dep_role, reg_roles = base[model]
    norm_col = "norm_l2" if use_l2 else "norm_l1"
    role_to_col = {"norm": norm_col, "uncertainty": "uncertainty", "sigma_bar": "sigma_bar"}
    y = frame[role_to_col[dep_role]].to_numpy()
    X = {role: frame[role_to_col[role]].to_numpy() for role in reg_roles}
    res = ols_newey_west(y, X, nw_lag=nw_lag, dof_correction=dof_correction)
    number = model if not use_l2 else model * 10 + 2
    row = {
        "model": number,
        "norm": norm_label,
        "uncertainty": column,
        "window": window,
        "sample": sample,
        "n": res.n,
        "nw_lag": res.nw_lag,
        "adj_r2": res.adjusted_r2,
        "coef_const": res.coef("const"),
        "t_const": res.tstat("const"),
    }
    for role in reg_roles:
        row[f"coef_{role}"] = res.coef(role)
        row[f"t_{role}"] = res.tstat(role)
    return BatteryRow(**row)


def model_battery(
    norms: dict[int, NormSeries],
    unc: UncertaintySeries,
    spec_set: str,
    *,
    columns: tuple[str, ...] | None = None,
    nw_lag: int | str = "auto",
    dof_correction: bool = False,
    norm_variants: tuple[int, ...] = (1, 2),
) -> list[BatteryRow]:
    """Run one battery over every uncertainty column and window length.

    ``spec_set``: "norms" fits models 1-3 (and 12-32 with the L2 norm),
    "uncertainty" fits models 4-6 (42-62), "split" refits models 4-6 (42-62)
    on the high/low halves at the column's median. ``norm_variants`` picks
    which norms participate (1 -> L11-style models, 2 -> L12-style); both by
    default. Norm columns come from the NormSeries, so at norm_dim=0 the
    "L11"/"L12" roles are really L01/L02.
    """
    if spec_set not in (BATTERY_NORMS, BATTERY_UNCERTAINTY, BATTERY_SPLIT):
        raise MisalignedMonths(f"unknown battery {spec_set!r}")
    cols = tuple(columns) if columns else unc.columns
    rows: list[BatteryRow] = []
    models = _NORM_MODELS if spec_set == BATTERY_NORMS else _UNC_MODELS
    for window in sorted(norms):
        series = norms[window]
        l1_label = series.l1_name
        l2_label = series.l2_name
        for column in cols:
            frame = _aligned_frame(series, unc, column)
            for p_use, label in ((1, l1_label), (2, l2_label)):
                if p_use not in norm_variants:
                    continue
                use_l2 = p_use == 2
                for model in sorted(models):
                    if spec_set == BATTERY_SPLIT:
                        high, low = median_split(frame["uncertainty"].to_numpy())
                        for sample, idx in (("high", high), ("low", low)):
                            sub = frame.iloc[idx]
                            rows.append(
                                _fit_cell(
                                    sub, model, use_l2, label, column, window,
                                    sample, nw_lag, dof_correction,
                                )
                            )
                    else:
                        rows.append(
                            _fit_cell(
                                frame, model, use_l2, label, column, window,
                                FULL_SAMPLE, nw_lag, dof_correction,
                            )
                        )
    return rows
