"""Loss assembly and optimization for the partitioned survival model.

Both training modes run through one code path. Baseline mode freezes the
cut points at their initial quantile positions and fits the classifier
alone; learned mode moves the interior cut points jointly with the
classifier through the sigmoid relaxation, annealing the temperature
whenever the validation loss plateaus. Grid search wraps the trainer in
five independent resplits per configuration and selects by mean
validation concordance.
"""

import json
import warnings
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import _kernels
from .data import (
    SurvivalDataset,
    even_time_cutpoints,
    km_quantile_cutpoints,
    observed_quantile_cutpoints,
    split,
)
from .errors import TrainingDivergenceError
from .network import GradientBundle, MLPParams, backward, forward, init_params
from .partition import (
    DEFAULT_MIN_GAP_FRACTION,
    CutPoints,
    beta_regularizer,
    beta_regularizer_grad,
    project_cutpoints,
)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

# tau defaults as fractions of the horizon: 1e-3 * t_max starts at 0.1 for
# a horizon of 100 and the floor sits two decades below the start.
TAU_INIT_FRACTION = 1e-3
TAU_FLOOR_FRACTION = 1e-5

MODES = ("learned", "baseline")
CUT_INITS = ("auto", "observed_quantile", "km_quantile", "even_time")
REG_FORMS = ("log_pdf", "pdf")

MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for one training run.

    tau_init and tau_floor default to fixed fractions of the data horizon
    and are resolved when training starts; set them explicitly to override.
    reg_strength weights the cut-spacing regularizer and weight_decay is
    the decoupled penalty on network weights (biases and cuts excluded).
    """

    m: int = 1
    hidden: int = 32
    lr: float = 0.01
    weight_decay: float = 0.0
    reg_strength: float = 1.0
    batch_size: int = 64
    epochs: int = 250
    tau_init: float | None = None
    tau_floor: float | None = None
    tau_factor: float = 0.5
    patience: int = 10
    improve_threshold: float = 1e-4
    seed: int = 0
    mode: str = "learned"
    cut_init: str = "auto"
    reg_form: str = "log_pdf"
    freeze_cuts: bool = False
    fractions: tuple = (0.75, 0.15, 0.10)

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise ValueError(f"m must be a non-negative integer, got {self.m}")
        if self.hidden < 1:
            raise ValueError("hidden must be at least 1")
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if self.weight_decay < 0 or self.reg_strength < 0:
            raise ValueError("weight_decay and reg_strength must be non-negative")
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be at least 1")
        for name in ("tau_init", "tau_floor"):
            v = getattr(self, name)
            if v is not None and not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive when given, got {v}")
        if self.tau_init is not None and self.tau_floor is not None:
            if self.tau_floor > self.tau_init:
                raise ValueError("tau_floor must not exceed tau_init")
        if not 0 < self.tau_factor < 1:
            raise ValueError("tau_factor must lie in (0, 1)")
        if self.patience < 1:
            raise ValueError("patience must be at least 1")
        if self.improve_threshold <= 0:
            raise ValueError("improve_threshold must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.cut_init not in CUT_INITS:
            raise ValueError(f"cut_init must be one of {CUT_INITS}, got {self.cut_init!r}")
        if self.reg_form not in REG_FORMS:
            raise ValueError(f"reg_form must be one of {REG_FORMS}, got {self.reg_form!r}")
        fr = tuple(float(f) for f in self.fractions)
        if len(fr) != 3 or any(f <= 0 for f in fr) or abs(sum(fr) - 1.0) > 1e-9:
            raise ValueError(f"fractions must be three positives summing to 1, got {fr}")
        object.__setattr__(self, "fractions", fr)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fractions"] = list(self.fractions)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown TrainConfig fields: {sorted(unknown)}")
        d = dict(d)
        if "fractions" in d:
            d["fractions"] = tuple(d["fractions"])
        return cls(**d)


def derive_seed(*parts) -> int:
    """Counter-based seed derivation: one root seed plus an index path."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def _resolved_taus(config: TrainConfig, t_max) -> tuple:
    if (config.tau_init is None or config.tau_floor is None) and t_max is None:
        raise ValueError("t_max is required to resolve default tau settings")
    tau_init = config.tau_init if config.tau_init is not None else TAU_INIT_FRACTION * t_max
    tau_floor = config.tau_floor if config.tau_floor is not None else TAU_FLOOR_FRACTION * t_max
    if not 0 < tau_floor <= tau_init:
        raise ValueError(f"need 0 < tau_floor <= tau_init, got {tau_floor}, {tau_init}")
    return float(tau_init), float(tau_floor)


def initial_cutpoints(config: TrainConfig, train_set: SurvivalDataset) -> CutPoints:
    """Starting cut points for either mode, computed on the training split.

    With the default "auto" policy, cut points that will stay fixed
    (baseline mode, or frozen in learned mode) sit at observed-time
    quantiles so the data places the grid, while learnable cut points
    start from a neutral even partition of the axis and let the
    gradients place them.
    """
    if config.m == 0:
        return CutPoints(np.empty(0), train_set.t_max)
    init = config.cut_init
    if init == "auto":
        fixed = config.mode != "learned" or config.freeze_cuts
        init = "observed_quantile" if fixed else "even_time"
    if init == "observed_quantile":
        return observed_quantile_cutpoints(train_set, config.m)
    if init == "km_quantile":
        return km_quantile_cutpoints(train_set, config.m)
    return even_time_cutpoints(train_set.t_max, config.m)


def nll(dataset: SurvivalDataset, params: MLPParams, cuts: CutPoints, tau: float) -> float:
    """Mean censored negative log likelihood of the relaxed model.

    Events contribute -log density at their time, censored records
    -log survival; survival is floored at 1e-12 inside the kernel.
    """
    if params.w2.shape[0] != cuts.m + 1:
        raise ValueError(
            f"network predicts {params.w2.shape[0]} intervals but the partition has {cuts.m + 1}"
        )
    loss, _ = _kernels.nll_loss(
        np.ascontiguousarray(dataset.features),
        np.ascontiguousarray(dataset.times),
        np.ascontiguousarray(dataset.events, dtype=np.float64),
        params.w1, params.b1, params.w2, params.b2,
        np.ascontiguousarray(cuts.interior), float(cuts.t_max), float(tau),
    )
    return float(loss)


def total_loss(
    dataset: SurvivalDataset,
    params: MLPParams,
    cuts: CutPoints,
    tau: float,
    reg_strength: float,
    reg_form: str = "log_pdf",
) -> float:
    """nll minus the per-cut-normalized spacing regularizer."""
    base = nll(dataset, params, cuts, tau)
    if reg_strength != 0.0 and cuts.m >= 1:
        base -= reg_strength * beta_regularizer(cuts.interior, cuts.t_max, reg_form) / cuts.m
    return base


@dataclass
class AdamState:
    """First and second moment accumulators, ordered w1, b1, w2, b2, cuts."""

    ms: list
    vs: list
    step: int = 0

    @classmethod
    def initial(cls, params: MLPParams, m: int) -> "AdamState":
        tensors = [params.w1, params.b1, params.w2, params.b2, np.zeros(m)]
        return cls(
            [np.zeros_like(t) for t in tensors],
            [np.zeros_like(t) for t in tensors],
            0,
        )

    def copy(self) -> "AdamState":
        return AdamState([m.copy() for m in self.ms], [v.copy() for v in self.vs], self.step)


def adam_step(
    params: MLPParams,
    cuts: CutPoints,
    grads: GradientBundle,
    state: AdamState,
    config: TrainConfig,
    update_cuts=None,
    min_gap=None,
    cut_lr=None,
):
    """One Adam update with decoupled weight decay on the weight matrices.

    Cut points step at cut_lr (default lr * t_max: the learning rate in
    normalized time units; a cut could never cross a t_max-sized axis
    within the epoch budget at the raw network rate), receive no decay,
    and are projected back onto the valid ordered set after the step.
    When update_cuts is false the cut points and their moments are
    untouched. Returns fresh (params, cuts, state); inputs are not
    mutated.
    """
    if update_cuts is None:
        update_cuts = config.mode == "learned" and not config.freeze_cuts and cuts.m >= 1
    if min_gap is None:
        min_gap = DEFAULT_MIN_GAP_FRACTION * cuts.t_max
    if cut_lr is None:
        cut_lr = config.lr * cuts.t_max
    tensors = [params.w1, params.b1, params.w2, params.b2]
    gts = [grads.w1, grads.b1, grads.w2, grads.b2]
    decay = [True, False, True, False]
    lrs = [config.lr] * 4
    if update_cuts:
        tensors.append(cuts.interior)
        gts.append(grads.cuts)
        decay.append(False)
        lrs.append(cut_lr)
    for g in gts:
        if not np.all(np.isfinite(g)):
            raise TrainingDivergenceError("non-finite gradient in optimizer step")
    t = state.step + 1
    bc1 = 1.0 - ADAM_BETA1 ** t
    bc2 = 1.0 - ADAM_BETA2 ** t
    new_ms = [m.copy() for m in state.ms]
    new_vs = [v.copy() for v in state.vs]
    out = []
    for k, (theta, g, dec, lr_k) in enumerate(zip(tensors, gts, decay, lrs)):
        m = ADAM_BETA1 * state.ms[k] + (1.0 - ADAM_BETA1) * g
        v = ADAM_BETA2 * state.vs[k] + (1.0 - ADAM_BETA2) * g * g
        new_ms[k] = m
        new_vs[k] = v
        step = lr_k * (m / bc1) / (np.sqrt(v / bc2) + ADAM_EPS)
        theta_new = theta - step
        if dec and config.weight_decay != 0.0:
            theta_new = theta_new - config.lr * config.weight_decay * theta
        out.append(theta_new)
    new_params = MLPParams(out[0], out[1], out[2], out[3])
    if update_cuts:
        new_cuts = CutPoints(project_cutpoints(out[4], cuts.t_max, min_gap), cuts.t_max)
    else:
        new_cuts = cuts
    return new_params, new_cuts, AdamState(new_ms, new_vs, t)


def _plateau_fires(history, threshold, patience):
    """Epoch indices (0-based) at which the plateau rule fires.

    The rule watches the running best: a streak epoch is one where the
    best has not moved down by at least `threshold` in total since the
    streak began. Small gains that add up to `threshold` break the
    streak, so a slow steady descent holds the temperature while a
    genuinely flat stretch of `patience` epochs releases it. The first
    epoch has nothing to improve on and starts the streak at 1; each
    fire resets the streak so fires are at least `patience` apart.
    """
    fires = []
    best = np.inf
    anchor = np.inf
    streak = 0
    for i, v in enumerate(history):
        if i == 0:
            best = v
            anchor = v
            streak = 1
        else:
            best = min(best, v)
            if anchor - best >= threshold:
                anchor = best
                streak = 0
            else:
                streak += 1
        if streak >= patience:
            streak = 0
            anchor = best
            fires.append(i)
    return fires


def anneal_tau(val_history, tau: float, config: TrainConfig, t_max=None) -> float:
    """Plateau rule applied to a validation-loss history: reduce tau when
    the latest epoch completes `patience` consecutive epochs in which the
    best loss has improved by less than `improve_threshold` in total.

    Pure function of the history; earlier fires implied by the same
    history are replayed so the streak accounting matches a tracker that
    saw the epochs one at a time.
    """
    hist = [float(v) for v in val_history]
    if not hist:
        return tau
    if config.tau_floor is not None:
        floor = config.tau_floor
    else:
        _, floor = _resolved_taus(config, t_max)
    fires = _plateau_fires(hist, config.improve_threshold, config.patience)
    if fires and fires[-1] == len(hist) - 1:
        return max(tau * config.tau_factor, floor)
    return tau


class _PlateauTracker:
    """Incremental form of _plateau_fires driving the annealing schedule;
    the streak resets after every temperature drop so drops are at least
    `patience` apart."""

    def __init__(self, threshold, patience, factor, floor):
        self.threshold = threshold
        self.patience = patience
        self.factor = factor
        self.floor = floor
        self.best = np.inf
        self.anchor = np.inf
        self.streak = 0
        self.seen = 0

    def observe(self, val_loss, tau) -> float:
        self.seen += 1
        if self.seen == 1:
            self.best = val_loss
            self.anchor = val_loss
            self.streak = 1
        else:
            self.best = min(self.best, val_loss)
            if self.anchor - self.best >= self.threshold:
                self.anchor = self.best
                self.streak = 0
            else:
                self.streak += 1
        if self.streak >= self.patience:
            self.streak = 0
            self.anchor = self.best
            return max(tau * self.factor, self.floor)
        return tau


@dataclass
class FittedModel:
    """Training result: best-validation-epoch snapshot plus diagnostics.

    final_tau is the temperature in effect during the snapshot epoch.
    train_trace rows are (epoch, train_loss, val_loss, tau) with the tau
    used for that epoch's updates; train_loss is the full objective on
    the training set while val_loss is the censored NLL on the
    validation set (the quantity the annealer and the best-epoch
    snapshot watch). cut_history row 0 is the initial cuts and row e+1
    the cuts after epoch e.
    """

    params: MLPParams
    cuts: CutPoints
    final_tau: float
    train_trace: list
    best_epoch: int
    cut_history: np.ndarray
    n_floor_hits: int
    config: TrainConfig
    fingerprints: dict = field(default_factory=dict)

    def interval_probs(self, x) -> np.ndarray:
        return forward(self.params, x)

    @property
    def t_max(self) -> float:
        return self.cuts.t_max


def train(config: TrainConfig, train_set: SurvivalDataset, val_set: SurvivalDataset) -> FittedModel:
    """Fit the model under the given configuration.

    Returns the parameters and cut points from the epoch with the best
    validation loss. Bit-reproducible given (config, datasets): all
    randomness flows from config.seed through a fixed derivation order.
    """
    if train_set.p != val_set.p:
        raise ValueError("train and validation sets disagree on feature count")
    if train_set.t_max != val_set.t_max:
        raise ValueError("train and validation sets must share t_max")
    t_max = train_set.t_max
    tau, tau_floor = _resolved_taus(config, t_max)
    tau_init = tau
    min_gap = DEFAULT_MIN_GAP_FRACTION * t_max
    init_ss, shuffle_ss = np.random.SeedSequence(config.seed).spawn(2)
    params = init_params(train_set.p, config.hidden, config.m, init_ss)
    cuts = initial_cutpoints(config, train_set)
    state = AdamState.initial(params, config.m)
    update_cuts = config.mode == "learned" and not config.freeze_cuts and config.m >= 1
    eff_reg = config.reg_strength if (config.mode == "learned" and config.m >= 1) else 0.0
    shuffle_rng = np.random.default_rng(shuffle_ss)

    xt = np.ascontiguousarray(train_set.features)
    yt = np.ascontiguousarray(train_set.times)
    st = np.ascontiguousarray(train_set.events, dtype=np.float64)

    trace = []
    cut_history = [cuts.interior.copy()]
    best_val = np.inf
    best = None
    floor_hits = 0
    tracker = _PlateauTracker(config.improve_threshold, config.patience, config.tau_factor, tau_floor)

    for epoch in range(config.epochs):
        perm = shuffle_rng.permutation(train_set.n)
        for bnum, start in enumerate(range(0, train_set.n, config.batch_size)):
            idx = perm[start : start + config.batch_size]
            loss, grads, n_floor = backward(
                params, xt[idx], yt[idx], st[idx],
                cuts.interior, t_max, tau, want_cut_grads=update_cuts,
            )
            floor_hits += int(n_floor)
            if update_cuts and eff_reg != 0.0:
                grads.cuts = grads.cuts - (eff_reg / config.m) * beta_regularizer_grad(
                    cuts.interior, t_max, config.reg_form
                )
            if not np.isfinite(loss):
                raise TrainingDivergenceError(
                    f"non-finite loss at epoch {epoch}, batch {bnum}",
                    epoch=epoch, batch=bnum, trace=trace,
                )
            try:
                # The temperature sets the length scale on which the
                # relaxed objective is informative about cut placement,
                # so the cut step follows the annealing ladder down.
                params, cuts, state = adam_step(
                    params, cuts, grads, state, config,
                    update_cuts=update_cuts, min_gap=min_gap,
                    cut_lr=config.lr * t_max * (tau / tau_init),
                )
            except TrainingDivergenceError as err:
                raise TrainingDivergenceError(
                    f"non-finite gradient at epoch {epoch}, batch {bnum}",
                    epoch=epoch, batch=bnum, trace=trace,
                ) from err
        train_loss = total_loss(train_set, params, cuts, tau, eff_reg, config.reg_form)
        # Validation is monitored on the censored NLL alone. The cut-prior
        # term is a training regularizer, not a measure of out-of-sample
        # fit; folding it in masks real NLL progress while the cuts move
        # (the two terms change in opposite directions), which trips the
        # plateau detector early and freezes the cuts at a sharp tau.
        val_loss = nll(val_set, params, cuts, tau)
        if not (np.isfinite(train_loss) and np.isfinite(val_loss)):
            raise TrainingDivergenceError(
                f"non-finite epoch loss at epoch {epoch}",
                epoch=epoch, trace=trace,
            )
        trace.append((epoch, float(train_loss), float(val_loss), float(tau)))
        cut_history.append(cuts.interior.copy())
        if val_loss < best_val:
            best_val = val_loss
            best = (params.copy(), CutPoints(cuts.interior.copy(), t_max), epoch, tau)
        tau = tracker.observe(val_loss, tau)

    best_params, best_cuts, best_epoch, best_tau = best
    if floor_hits:
        warnings.warn(
            f"relaxed survival hit the 1e-12 floor {floor_hits} times during training"
        )
    return FittedModel(
        params=best_params,
        cuts=best_cuts,
        final_tau=float(best_tau),
        train_trace=trace,
        best_epoch=int(best_epoch),
        cut_history=np.array(cut_history),
        n_floor_hits=int(floor_hits),
        config=config,
        fingerprints={"train": train_set.fingerprint(), "val": val_set.fingerprint()},
    )


@dataclass
class GridConfigResult:
    """Validation concordance of one configuration across the folds."""

    config: TrainConfig
    fold_val_ci: list
    n_failed: int
    errors: list

    @property
    def mean_val_ci(self) -> float:
        return float(np.mean(self.fold_val_ci))

    @property
    def std_val_ci(self) -> float:
        if len(self.fold_val_ci) < 2:
            return 0.0
        return float(np.std(self.fold_val_ci, ddof=1))


@dataclass
class GridSearchResult:
    """Leaderboard plus the winner's held-out test evaluation.

    results is sorted by mean validation concordance, best first; ties
    keep grid order. winner_models and winner_test_reports are per fold
    (None where that fold failed).
    """

    results: list
    best: GridConfigResult
    winner_models: list
    winner_test_reports: list
    winner_test_summary: dict

    @property
    def best_config(self) -> TrainConfig:
        return self.best.config


def _run_grid_cell(config, train_set, val_set):
    """Train one (config, fold) cell and score validation concordance."""
    from .metrics import antolini_cindex

    model = train(config, train_set, val_set)
    return float(antolini_cindex(model, val_set)), model


def grid_search_cv(grid, dataset: SurvivalDataset, folds: int = 5, seed: int = 0, jobs: int = 1) -> GridSearchResult:
    """Grid search with `folds` independent resplits shared by every
    configuration; selection by mean validation concordance, with the
    winner's test metrics reported per fold. A failed cell scores 0."""
    from .metrics import evaluate_model

    grid = list(grid)
    if not grid:
        raise ValueError("grid must contain at least one configuration")
    fractions = grid[0].fractions
    for cfg in grid:
        if cfg.fractions != fractions:
            raise ValueError("all grid configurations must share split fractions")
    splits = [
        split(dataset, fractions, derive_seed(seed, 0, f)) for f in range(folds)
    ]
    cells = [
        (ci, f, replace(cfg, seed=derive_seed(seed, 1, f)))
        for ci, cfg in enumerate(grid)
        for f in range(folds)
    ]
    outcomes = {}
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                (ci, f): pool.submit(_run_grid_cell, cfg, splits[f][0], splits[f][1])
                for ci, f, cfg in cells
            }
            for key, fut in futures.items():
                try:
                    outcomes[key] = (*fut.result(), None)
                except Exception as exc:
                    outcomes[key] = (0.0, None, f"{type(exc).__name__}: {exc}")
    else:
        for ci, f, cfg in cells:
            try:
                outcomes[(ci, f)] = (*_run_grid_cell(cfg, splits[f][0], splits[f][1]), None)
            except Exception as exc:
                outcomes[(ci, f)] = (0.0, None, f"{type(exc).__name__}: {exc}")

    results = []
    models = {}
    for ci, cfg in enumerate(grid):
        fold_ci, errors = [], []
        for f in range(folds):
            val_ci, model, err = outcomes[(ci, f)]
            fold_ci.append(val_ci)
            models[(ci, f)] = model
            if err is not None:
                errors.append(f"fold {f}: {err}")
        results.append(
            GridConfigResult(
                config=cfg, fold_val_ci=fold_ci, n_failed=len(errors), errors=errors
            )
        )
    order = sorted(range(len(grid)), key=lambda ci: -results[ci].mean_val_ci)
    best_ci = order[0]
    winner_models = [models[(best_ci, f)] for f in range(folds)]
    winner_reports = [
        evaluate_model(m, splits[f][2]) if m is not None else None
        for f, m in enumerate(winner_models)
    ]
    summary = {}
    for name in ("cindex", "auc_last", "calib_slope", "calib_intercept"):
        vals = [
            getattr(r, name)
            for r in winner_reports
            if r is not None and getattr(r, name) is not None
        ]
        if vals:
            summary[name] = (
                float(np.mean(vals)),
                float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0,
            )
    return GridSearchResult(
        results=[results[ci] for ci in order],
        best=results[best_ci],
        winner_models=winner_models,
        winner_test_reports=winner_reports,
        winner_test_summary=summary,
    )


def save_model(path, model: FittedModel) -> None:
    """Write the model artifact as one self-describing JSON document."""
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "config": model.config.to_dict(),
        "t_max": model.cuts.t_max,
        "cut_points": model.cuts.interior.tolist(),
        "params": model.params.to_dict(),
        "final_tau": model.final_tau,
        "best_epoch": model.best_epoch,
        "n_floor_hits": model.n_floor_hits,
        "trace": [[int(e), tl, vl, tau] for e, tl, vl, tau in model.train_trace],
        "cut_history": [row.tolist() for row in np.atleast_2d(model.cut_history)],
        "fingerprints": dict(model.fingerprints),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path) -> FittedModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema_version {version!r}")
    config = TrainConfig.from_dict(doc["config"])
    return FittedModel(
        params=MLPParams.from_dict(doc["params"]),
        cuts=CutPoints(np.array(doc["cut_points"], dtype=np.float64), float(doc["t_max"])),
        final_tau=float(doc["final_tau"]),
        train_trace=[(int(e), tl, vl, tau) for e, tl, vl, tau in doc["trace"]],
        best_epoch=int(doc["best_epoch"]),
        cut_history=np.array(doc["cut_history"], dtype=np.float64),
        n_floor_hits=int(doc["n_floor_hits"]),
        config=config,
        fingerprints=dict(doc.get("fingerprints", {})),
    )
