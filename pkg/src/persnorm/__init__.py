"""Persistence norms of rolling market-return point clouds.

Daily index prices become log returns; each calendar-month window of days is
a point cloud in R^k; Vietoris-Rips persistent homology turns each cloud
into a diagram; diagram norms and window volatility form monthly series that
are correlated with and regressed on uncertainty indexes with HAC inference.
"""

from . import errors
from .cloud import (
    PointCloud,
    WindowSpec,
    distance_matrix,
    point_cloud,
    validate_distance_matrix,
    window_slices,
    window_volatility,
)
from .econ import (
    BatteryRow,
    CorrelationMatrix,
    RegressionResult,
    RegressionSpec,
    correlation_table,
    median_split,
    model_battery,
    newey_west_auto_lag,
    ols_newey_west,
    pearson,
    spearman,
)
from .ingest import (
    ColumnSchema,
    PriceSeries,
    ReturnMatrix,
    UncertaintySeries,
    align_panel,
    load_price_csv,
    load_uncertainty_csv,
    log_returns,
)
from .norms import NormSeries, build_norm_series, persistence_norm, standardize
from .persistence import (
    FilteredSimplex,
    PersistenceDiagram,
    compute_persistence,
    dim0_mst_oracle,
    enclosing_radius,
    rips_filtration,
    rips_persistence,
)
from .pipeline import PipelineConfig, build_config, emit_table, parse_config_file, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "errors",
    "ColumnSchema",
    "PriceSeries",
    "ReturnMatrix",
    "UncertaintySeries",
    "load_price_csv",
    "log_returns",
    "align_panel",
    "load_uncertainty_csv",
    "WindowSpec",
    "PointCloud",
    "window_slices",
    "point_cloud",
    "distance_matrix",
    "validate_distance_matrix",
    "window_volatility",
    "FilteredSimplex",
    "PersistenceDiagram",
    "enclosing_radius",
    "rips_filtration",
    "compute_persistence",
    "rips_persistence",
    "dim0_mst_oracle",
    "NormSeries",
    "persistence_norm",
    "build_norm_series",
    "standardize",
    "CorrelationMatrix",
    "RegressionSpec",
    "RegressionResult",
    "BatteryRow",
    "pearson",
    "spearman",
    "correlation_table",
    "ols_newey_west",
    "newey_west_auto_lag",
    "median_split",
    "model_battery",
    "PipelineConfig",
    "parse_config_file",
    "build_config",
    "run_pipeline",
    "emit_table",
    "__version__",
]
