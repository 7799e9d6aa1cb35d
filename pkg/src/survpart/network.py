"""Two-layer softmax classifier over time intervals.

forward gives interval probabilities; backward gives exact reverse-mode
gradients of the censored relaxed-model loss for every parameter and,
when requested, the interior cut points. The heavy lifting lives in the
kernel backends; this module owns parameter containers and shapes.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass
class MLPParams:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        self.w1 = np.asarray(self.w1, dtype=np.float64)
        self.b1 = np.asarray(self.b1, dtype=np.float64)
        self.w2 = np.asarray(self.w2, dtype=np.float64)
        self.b2 = np.asarray(self.b2, dtype=np.float64)
        h, p = self.w1.shape
        k, h2 = self.w2.shape
        if self.b1.shape != (h,) or h2 != h or self.b2.shape != (k,):
            raise ValueError("inconsistent parameter shapes")

    @property
    def n_features(self) -> int:
        return self.w1.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.w1.shape[0]

    @property
    def n_intervals(self) -> int:
        return self.w2.shape[0]

    def copy(self) -> "MLPParams":
        return MLPParams(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())

    def to_dict(self):
        return {
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2.tolist(),
        }

    @classmethod
    def from_dict(cls, d) -> "MLPParams":
        return cls(
            np.array(d["w1"], dtype=np.float64),
            np.array(d["b1"], dtype=np.float64),
            np.array(d["w2"], dtype=np.float64),
            np.array(d["b2"], dtype=np.float64),
        )


@dataclass
class GradientBundle:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    cuts: np.ndarray


def init_params(n_features: int, n_hidden: int, m: int, seed) -> MLPParams:
    """Uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) weights, zero biases.

    The output layer has m+1 units, one per interval. Same seed, same bits.
    """
    if n_features < 1 or n_hidden < 1 or m < 0:
        raise ValueError("need n_features >= 1, n_hidden >= 1, m >= 0")
    rng = np.random.default_rng(seed)
    lim1 = np.sqrt(1.0 / n_features)
    lim2 = np.sqrt(1.0 / n_hidden)
    w1 = rng.uniform(-lim1, lim1, size=(n_hidden, n_features))
    w2 = rng.uniform(-lim2, lim2, size=(m + 1, n_hidden))
    return MLPParams(w1, np.zeros(n_hidden), w2, np.zeros(m + 1))


def forward(params: MLPParams, x) -> np.ndarray:
    """Interval probabilities softmax(w2 relu(w1 x + b1) + b2), shape (n, m+1)."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != params.n_features:
        raise ValueError(
            f"expected {params.n_features} features, got {x.shape[1]}"
        )
    if not np.all(np.isfinite(x)):
        raise ValueError("input features must be finite")
    hid = np.maximum(x @ params.w1.T + params.b1, 0.0)
    logits = hid @ params.w2.T + params.b2
    logits -= logits.max(axis=1, keepdims=True)
    ez = np.exp(logits)
    probs = ez / ez.sum(axis=1, keepdims=True)
    return probs[0] if single else probs


def backward(
    params: MLPParams,
    x,
    times,
    events,
    cuts,
    t_max: float,
    tau: float,
    want_cut_grads: bool = True,
):
    """Loss and exact gradients of the mean censored relaxed NLL on a batch.

    Returns (loss, GradientBundle, n_floored) where n_floored counts
    censored records whose relaxed survival was clamped at the 1e-12 floor.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(times, dtype=np.float64)
    s = np.ascontiguousarray(events, dtype=np.float64)
    cuts = np.ascontiguousarray(cuts, dtype=np.float64)
    loss, dw1, db1, dw2, db2, dcuts, n_floor = _kernels.nll_loss_grads(
        x, y, s, params.w1, params.b1, params.w2, params.b2,
        cuts, float(t_max), float(tau), want_cut_grads,
    )
    return loss, GradientBundle(dw1, db1, dw2, db2, dcuts), n_floor
