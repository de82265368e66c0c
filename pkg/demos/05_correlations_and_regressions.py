"""
Correlation tables and Newey-West regressions
==============================================

Monthly norm series meet monthly uncertainty indexes: rank and linear
correlations, HAC-robust regressions, and the six-model battery with its
high/low uncertainty split.
"""

import numpy as np
import pandas as pd

from persnorm import (
    NormSeries,
    UncertaintySeries,
    correlation_table,
    median_split,
    model_battery,
    newey_west_auto_lag,
    ols_newey_west,
    pearson,
    spearman,
)

rng = np.random.default_rng(11)
months = pd.period_range("2001-01", periods=120, freq="M")
n = len(months)

# A synthetic monthly record: volatility follows a slow AR(1) cycle, the
# norms scale with it, and the uncertainty index loads on the same cycle
# plus noise of its own.
cycle = np.empty(n)
cycle[0] = 0.0
for t in range(1, n):
    cycle[t] = 0.9 * cycle[t - 1] + rng.normal(0.0, 0.3)
sigma_bar = 0.012 * np.exp(0.4 * cycle)
l1 = sigma_bar * rng.uniform(8.0, 12.0, n)
l2 = 0.75 * l1
unc_col = 100.0 * np.exp(0.3 * cycle + rng.normal(0.0, 0.15, n))

norms = {
    1: NormSeries(
        window_length_months=1, months=months, norm_dim=1,
        l1=l1, l2=l2, sigma_bar=sigma_bar,
    )
}
unc = UncertaintySeries(months=months, data=pd.DataFrame({"UNC1": unc_col}, index=months))

# Pairwise measures first: pearson is linear, spearman is rank-based and
# survives any monotone distortion of either series.
print("pearson(sigma_bar, UNC1): ", f"{pearson(sigma_bar, unc_col):+.4f}")
print("spearman(sigma_bar, UNC1):", f"{spearman(sigma_bar, unc_col):+.4f}")
print("spearman(sigma_bar, exp(UNC1 rank-preserving)):",
      f"{spearman(sigma_bar, np.exp(unc_col / 100.0)):+.4f}")

table = correlation_table({"L11": l1, "sigma_bar": sigma_bar, "UNC1": unc_col})
print("\ncorrelation table (spearman above, pearson below the diagonal):")
print(table.to_frame().to_string(float_format="{:+.3f}".format))

# A single regression: L1 norm on the uncertainty index and volatility.
# The constant is prepended automatically.  Monthly overlapping windows
# leave serial correlation in the residuals, so the errors use the
# Bartlett-kernel HAC estimator; the lag defaults to
# floor(4 * (n/100)^(2/9)).
X = {"UNC1": unc_col, "sigma_bar": sigma_bar}
fit = ols_newey_west(l1, X)
print(f"\nauto lag at n={n}: {newey_west_auto_lag(n)}  (used: {fit.nw_lag})")
for name, b, se, t in zip(fit.names, fit.beta, fit.se, fit.t):
    print(f"  {name:>9}  beta {b:+.5f}  se {se:.5f}  t {t:+.2f}")
print(f"  adjusted R^2 {fit.adjusted_r2:.4f}  n {fit.n}")

# Lag 0 collapses to plain White errors; longer lags typically widen them
# when residuals are persistent.
white = ols_newey_west(l1, X, nw_lag=0)
print("\nse(UNC1) by lag:  0 ->", f"{white.se[1]:.6f}", f"  auto({fit.nw_lag}) ->", f"{fit.se[1]:.6f}")

# The battery fits the standard six specifications per uncertainty column
# and window: models 1-3 explain the norm, 4-6 explain the index, and the
# x2 variants swap in the L2 norm.
rows = model_battery(norms, unc, "norms")
print("\nnorm-side battery (models 1-3 and L2 variants):")
for r in rows:
    unc_part = "" if r.coef_uncertainty is None else f" unc {r.coef_uncertainty:+.4f} (t {r.t_uncertainty:+.2f})"
    sig_part = "" if r.coef_sigma_bar is None else f" sigma {r.coef_sigma_bar:+.4f} (t {r.t_sigma_bar:+.2f})"
    print(f"  model {r.model:>2} {r.norm}: adj R^2 {r.adj_r2:+.3f}{unc_part}{sig_part}")

# The split battery refits the index-side models on the high and low
# halves at the median of the uncertainty column.
high, low = median_split(unc_col)
print("\nmedian split sizes:", len(high), "high /", len(low), "low")
split_rows = model_battery(norms, unc, "split", norm_variants=(1,))
for r in split_rows:
    part = "" if r.coef_norm is None else f"  norm coef {r.coef_norm:+.4f} (t {r.t_norm:+.2f})"
    print(f"  model {r.model} [{r.sample}]  n {r.n}  lag {r.nw_lag}{part}")
