"""Evaluation of fitted interval models: time-dependent concordance,
discrimination at the final cut point, and Poisson-regression calibration.

All metrics score the hard piecewise model at the model's own cut points;
the sigmoid relaxation is a training device and plays no role here.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from . import _kernels
from .data import SurvivalDataset
from .errors import NumericError, UndefinedMetricError
from .network import forward
from .partition import interval_index

REPORT_SCHEMA_VERSION = 1


def _survival_matrix(probs) -> np.ndarray:
    """Survival at each upper interval boundary, shape (n, M+1).

    Column j is S(c_{j+1}) = sum of the interval masses after j, computed
    as an exact tail sum so entries are non-negative and non-increasing.
    """
    probs = np.atleast_2d(np.asarray(probs, dtype=np.float64))
    n, k = probs.shape
    rc = np.cumsum(probs[:, ::-1], axis=1)[:, ::-1]
    out = np.zeros((n, k))
    out[:, : k - 1] = rc[:, 1:]
    return out


def survival_at_cutpoints(model, dataset: SurvivalDataset) -> np.ndarray:
    """Model survival S(c_j | x_i) at the interior cuts and the horizon.

    Rows are non-increasing with entries in [0, 1]; the last column is
    survival through t_max, zero up to rounding.
    """
    probs = forward(model.params, dataset.features)
    return np.minimum(_survival_matrix(probs), 1.0)


def _cindex_parts(surv_matrix, z, events):
    num, den = _kernels.concordance_counts(
        np.ascontiguousarray(surv_matrix, dtype=np.float64),
        np.ascontiguousarray(z, dtype=np.int64),
        np.ascontiguousarray(events, dtype=np.int64),
    )
    if den == 0:
        raise UndefinedMetricError(
            "concordance undefined: no comparable pairs (need an event in an "
            "interval strictly before another record's interval)"
        )
    return float(num) / float(den), int(den)


def antolini_cindex(model, dataset: SurvivalDataset) -> float:
    """Time-dependent concordance of the fitted interval model.

    A pair is comparable when one record has an event in an interval
    strictly before the interval of the other record's observed time; the
    pair is concordant when the failing record has the lower survival
    through its own interval. Exact score ties count one half.
    """
    probs = forward(model.params, dataset.features)
    z = interval_index(dataset.times, model.cuts.interior, model.cuts.t_max)
    value, _ = _cindex_parts(_survival_matrix(probs), z, dataset.events)
    return value


def _auc_parts(score, times, events, c_last):
    cases = (events == 1) & (times <= c_last)
    controls = times > c_last
    excluded = (events == 0) & (times <= c_last)
    n_case = int(cases.sum())
    n_control = int(controls.sum())
    if n_case == 0 or n_control == 0:
        raise UndefinedMetricError(
            f"AUC undefined: {n_case} cases and {n_control} controls at the "
            f"final cut point {c_last}"
        )
    pooled = np.concatenate([score[cases], score[controls]])
    ranks = scipy.stats.rankdata(pooled)
    rank_sum = ranks[:n_case].sum()
    auc = (rank_sum - n_case * (n_case + 1) / 2.0) / (n_case * n_control)
    return float(auc), n_case, n_control, int(excluded.sum())


def auc_last_cutpoint(model, dataset: SurvivalDataset, cuts=None) -> float:
    """Discrimination of event-before-the-last-cut-point against
    observed-after, scored by 1 - S(c_M | x) with midrank tie handling.
    Records censored before the last cut point are excluded."""
    cuts = model.cuts if cuts is None else cuts
    if cuts.m == 0:
        raise UndefinedMetricError("AUC undefined: partition has no interior cut points")
    probs = forward(model.params, dataset.features)
    surv_last = _survival_matrix(probs)[:, cuts.m - 1]
    value, _, _, _ = _auc_parts(
        1.0 - surv_last, dataset.times, dataset.events, float(cuts.interior[-1])
    )
    return value


def _calibration_parts(surv_last, times, events, c_last):
    include = (times > c_last) | ((events == 1) & (times <= c_last))
    n_excluded = int(np.sum(~include))
    observed = ((events == 1) & (times <= c_last))[include].astype(np.float64)
    hazard = -np.log(surv_last[include])
    usable = np.isfinite(hazard) & (hazard > 0)
    n_dropped = int(np.sum(~usable))
    observed = observed[usable]
    hazard = hazard[usable]
    n_included = observed.shape[0]
    if n_included < 10:
        raise UndefinedMetricError(
            f"calibration undefined: only {n_included} usable records with "
            "positive predicted cumulative hazard (need 10)"
        )
    log_h = np.log(hazard)
    if np.var(log_h) < 1e-24:
        raise NumericError(
            "calibration slope undefined: predicted hazards are constant "
            "(zero covariate variance)"
        )
    ones = np.ones((n_included, 1))
    intercept = irls_poisson(ones, observed, offset=log_h)[0]
    slope_design = np.column_stack([np.ones(n_included), log_h])
    slope = irls_poisson(slope_design, observed)[1]
    return float(slope), float(intercept), n_included, n_excluded, n_dropped


def calibration(model, dataset: SurvivalDataset, cuts=None):
    """Crowson-style calibration (slope, intercept) at the last cut point.

    The cohort is every record either followed past c_M or with an event
    by c_M; the response is the event-by-c_M indicator and the predicted
    cumulative hazard is -log S(c_M | x). The intercept comes from an
    intercept-only Poisson fit with the log hazard as offset, the slope
    from a fit with the log hazard as covariate. Ideal values are 0 and 1.
    """
    cuts = model.cuts if cuts is None else cuts
    if cuts.m == 0:
        raise UndefinedMetricError(
            "calibration undefined: partition has no interior cut points"
        )
    probs = forward(model.params, dataset.features)
    surv_last = _survival_matrix(probs)[:, cuts.m - 1]
    slope, intercept, _, _, _ = _calibration_parts(
        surv_last, dataset.times, dataset.events, float(cuts.interior[-1])
    )
    return slope, intercept


def irls_poisson(design, response, offset=None, max_iter=100, tol=1e-8) -> np.ndarray:
    """Maximum-likelihood Poisson regression with log link via IRLS.

    Converges when the largest coefficient change drops below tol; raises
    NumericError on rank deficiency, ill conditioning, or non-convergence.
    """
    X = np.asarray(design, dtype=np.float64)
    y = np.asarray(response, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("design must be a 2-d matrix")
    n, k = X.shape
    if y.shape != (n,):
        raise ValueError("response length must match design rows")
    if offset is None:
        offset = np.zeros(n)
    offset = np.asarray(offset, dtype=np.float64)
    if offset.shape != (n,):
        raise ValueError("offset length must match design rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y)) and np.all(np.isfinite(offset))):
        raise ValueError("design, response and offset must be finite")
    if np.any(y < 0):
        raise ValueError("Poisson response must be non-negative")
    if np.linalg.matrix_rank(X) < k:
        raise NumericError("rank-deficient design matrix in Poisson IRLS")

    def loglik(b):
        eta = X @ b + offset
        return float(np.sum(y * eta - np.exp(eta)))

    beta = np.zeros(k)
    ll = loglik(beta)
    for _ in range(max_iter):
        eta = X @ beta + offset
        mu = np.exp(eta)
        if not np.all(np.isfinite(mu)) or np.any(mu <= 0):
            raise NumericError("Poisson IRLS produced a non-finite or zero mean")
        xw = X * mu[:, None]
        a = xw.T @ X
        cond = np.linalg.cond(a)
        if not np.isfinite(cond) or cond > 1e12:
            raise NumericError(
                f"ill-conditioned Poisson IRLS system (condition number {cond:.3e})"
            )
        working = X @ beta + (y - mu) / mu
        beta_new = np.linalg.solve(a, xw.T @ working)
        ll_new = loglik(beta_new)
        halvings = 0
        while not np.isfinite(ll_new) or ll_new < ll - 1e-12:
            beta_new = 0.5 * (beta_new + beta)
            ll_new = loglik(beta_new)
            halvings += 1
            if halvings > 50:
                raise NumericError("step halving failed in Poisson IRLS")
        delta = float(np.max(np.abs(beta_new - beta)))
        beta = beta_new
        ll = ll_new
        if delta < tol:
            return beta
    raise NumericError(
        f"Poisson IRLS did not converge in {max_iter} iterations "
        f"(last coefficient change {delta:.3e})"
    )


@dataclass
class MetricReport:
    """All metrics for one model on one dataset, with cohort counts.

    Metrics that could not be computed are None, with the reason recorded
    under the metric's name in reasons.
    """

    cindex: float | None = None
    auc_last: float | None = None
    calib_slope: float | None = None
    calib_intercept: float | None = None
    n_records: int = 0
    n_comparable_pairs: int = 0
    n_cases: int = 0
    n_controls: int = 0
    n_auc_excluded: int = 0
    n_calib_included: int = 0
    n_calib_excluded_censored: int = 0
    reasons: dict = field(default_factory=dict)
    provenance_warning: str | None = None

    CSV_FIELDS = (
        "cindex",
        "auc_last",
        "calib_slope",
        "calib_intercept",
        "n_records",
        "n_comparable_pairs",
        "n_cases",
        "n_controls",
        "n_auc_excluded",
        "n_calib_included",
        "n_calib_excluded_censored",
        "reasons",
        "provenance_warning",
    )

    def to_json_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "cindex": self.cindex,
            "auc_last": self.auc_last,
            "calib_slope": self.calib_slope,
            "calib_intercept": self.calib_intercept,
            "n_records": self.n_records,
            "n_comparable_pairs": self.n_comparable_pairs,
            "n_cases": self.n_cases,
            "n_controls": self.n_controls,
            "n_auc_excluded": self.n_auc_excluded,
            "n_calib_included": self.n_calib_included,
            "n_calib_excluded_censored": self.n_calib_excluded_censored,
            "reasons": dict(self.reasons),
            "provenance_warning": self.provenance_warning,
        }

    def to_csv_row(self) -> list:
        row = []
        for name in self.CSV_FIELDS:
            v = getattr(self, name)
            if name == "reasons":
                row.append("; ".join(f"{k}: {msg}" for k, msg in sorted(v.items())))
            elif v is None:
                row.append("")
            else:
                row.append(repr(v) if isinstance(v, float) else str(v))
        return row


def evaluate_model(model, dataset: SurvivalDataset, provenance_warning=None) -> MetricReport:
    """Compute every metric, collecting reasons instead of raising when a
    metric is undefined on this dataset."""
    if float(np.max(dataset.times)) > model.cuts.t_max:
        raise ValueError(
            f"dataset has observed times beyond the model horizon {model.cuts.t_max}"
        )
    probs = forward(model.params, dataset.features)
    surv = _survival_matrix(probs)
    report = MetricReport(n_records=dataset.n, provenance_warning=provenance_warning)

    try:
        z = interval_index(dataset.times, model.cuts.interior, model.cuts.t_max)
        report.cindex, report.n_comparable_pairs = _cindex_parts(surv, z, dataset.events)
    except UndefinedMetricError as exc:
        report.reasons["cindex"] = str(exc)

    if model.cuts.m == 0:
        report.reasons["auc_last"] = "partition has no interior cut points"
        report.reasons["calibration"] = "partition has no interior cut points"
        return report
    c_last = float(model.cuts.interior[-1])
    surv_last = surv[:, model.cuts.m - 1]

    try:
        auc, n_case, n_control, n_excl = _auc_parts(
            1.0 - surv_last, dataset.times, dataset.events, c_last
        )
        report.auc_last = auc
        report.n_cases = n_case
        report.n_controls = n_control
        report.n_auc_excluded = n_excl
    except UndefinedMetricError as exc:
        report.reasons["auc_last"] = str(exc)

    try:
        slope, intercept, n_inc, n_exc, _ = _calibration_parts(
            surv_last, dataset.times, dataset.events, c_last
        )
        report.calib_slope = slope
        report.calib_intercept = intercept
        report.n_calib_included = n_inc
        report.n_calib_excluded_censored = n_exc
    except (UndefinedMetricError, NumericError) as exc:
        report.reasons["calibration"] = str(exc)

    return report
