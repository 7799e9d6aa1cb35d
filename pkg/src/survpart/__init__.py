"""Discrete-time survival models with gradient-learned cut points.

The package fits a small interval classifier together with the interval
boundaries themselves, using a sigmoid relaxation of the piecewise
constant event density so the cut points admit exact gradients. Heavy
kernels run on numba when available, with a pure numpy fallback selected
by the SURVPART_BACKEND environment variable.
"""

from .backend import active_backend
from .data import (
    KMCurve,
    SurvivalDataset,
    SurvivalRecord,
    even_time_cutpoints,
    kaplan_meier,
    km_quantile_cutpoints,
    load_csv,
    observed_quantile_cutpoints,
    save_csv,
    split,
)
from .errors import (
    CSVParseError,
    NumericError,
    TrainingDivergenceError,
    UndefinedMetricError,
)
from .metrics import (
    MetricReport,
    antolini_cindex,
    auc_last_cutpoint,
    calibration,
    evaluate_model,
    irls_poisson,
    survival_at_cutpoints,
)
from .network import GradientBundle, MLPParams, backward, forward, init_params
from .partition import (
    CutPoints,
    beta_regularizer,
    hard_density,
    hard_survival,
    interval_index,
    interval_lengths,
    project_cutpoints,
    relaxed_density,
    relaxed_survival,
    smooth_membership,
)
from .simulate import SimulatedData, simulate_four_interval, simulate_two_interval
from .training import (
    AdamState,
    FittedModel,
    GridSearchResult,
    TrainConfig,
    adam_step,
    anneal_tau,
    grid_search_cv,
    load_model,
    nll,
    save_model,
    total_loss,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "CSVParseError",
    "CutPoints",
    "FittedModel",
    "GradientBundle",
    "GridSearchResult",
    "KMCurve",
    "MLPParams",
    "MetricReport",
    "NumericError",
    "SimulatedData",
    "SurvivalDataset",
    "SurvivalRecord",
    "TrainConfig",
    "TrainingDivergenceError",
    "UndefinedMetricError",
    "active_backend",
    "adam_step",
    "anneal_tau",
    "antolini_cindex",
    "auc_last_cutpoint",
    "backward",
    "beta_regularizer",
    "calibration",
    "evaluate_model",
    "even_time_cutpoints",
    "forward",
    "grid_search_cv",
    "hard_density",
    "hard_survival",
    "init_params",
    "interval_index",
    "interval_lengths",
    "irls_poisson",
    "kaplan_meier",
    "km_quantile_cutpoints",
    "load_csv",
    "load_model",
    "nll",
    "observed_quantile_cutpoints",
    "project_cutpoints",
    "relaxed_density",
    "relaxed_survival",
    "save_csv",
    "save_model",
    "simulate_four_interval",
    "simulate_two_interval",
    "smooth_membership",
    "split",
    "survival_at_cutpoints",
    "total_loss",
    "train",
]
