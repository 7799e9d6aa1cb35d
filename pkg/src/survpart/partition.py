"""Time-axis partitions and the piecewise-constant density they induce.

A partition of (0, t_max] into M+1 left-open right-closed intervals is
described by M strictly increasing interior cut points. A model assigns
each record a probability vector over the intervals; the implied density
is constant within each interval. For gradient-based learning of the cut
points the interval indicator is replaced by a product of two sigmoids
with temperature tau, which admits a closed-form integral and therefore a
closed-form relaxed survival function.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_MIN_GAP_FRACTION = 1e-3

# Beta(1.5, 1.5) has density (8/pi) * sqrt(u * (1 - u)) on (0, 1).
_LOG_8_OVER_PI = np.log(8.0 / np.pi)
_8_OVER_PI = 8.0 / np.pi


@dataclass(frozen=True)
class CutPoints:
    """Interior cut points of a partition of (0, t_max].

    interior is strictly increasing and lies strictly inside (0, t_max).
    The implied full boundary vector is [0, *interior, t_max].
    """

    interior: np.ndarray
    t_max: float

    def __post_init__(self):
        arr = np.asarray(self.interior, dtype=np.float64)
        object.__setattr__(self, "interior", arr)
        if arr.ndim != 1:
            raise ValueError("interior cut points must be a 1-d array")
        if not np.isfinite(self.t_max) or self.t_max <= 0:
            raise ValueError(f"t_max must be finite and positive, got {self.t_max}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cut points must be finite")
        full = self.full
        if not np.all(np.diff(full) > 0):
            raise ValueError(
                f"cut points must satisfy 0 < c_1 < ... < c_M < t_max, got {arr}"
            )

    @property
    def m(self) -> int:
        return self.interior.shape[0]

    @property
    def full(self) -> np.ndarray:
        return np.concatenate([[0.0], self.interior, [self.t_max]])

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.full)


def interval_lengths(cuts: np.ndarray, t_max: float) -> np.ndarray:
    """Lengths of the M+1 intervals induced by interior cuts on (0, t_max]."""
    full = np.concatenate([[0.0], np.asarray(cuts, dtype=np.float64), [t_max]])
    lengths = np.diff(full)
    if np.any(lengths <= 0):
        raise ValueError("cut points must be strictly increasing within (0, t_max)")
    return lengths


def interval_index(times, cuts, t_max) -> np.ndarray:
    """0-based interval index of each time under right-closed intervals.

    t belongs to interval j when c_j < t <= c_{j+1} (full boundary indexing),
    so an exact hit on a cut point lands in the earlier interval.
    """
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    cuts = np.asarray(cuts, dtype=np.float64)
    if np.any(times <= 0) or np.any(times > t_max):
        raise ValueError("times must lie in (0, t_max]")
    upper = np.concatenate([cuts, [t_max]])
    return np.searchsorted(upper, times, side="left")


def _check_probs(probs, n_intervals):
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape[-1] != n_intervals:
        raise ValueError(
            f"probability vector has {probs.shape[-1]} entries, partition has {n_intervals} intervals"
        )
    if np.any(probs < 0) or np.any(probs > 1):
        raise ValueError("interval probabilities must lie in [0, 1]")
    sums = probs.sum(axis=-1)
    if np.any(np.abs(sums - 1.0) > 1e-8):
        raise ValueError("interval probabilities must sum to 1 within 1e-8")
    return probs


def hard_density(probs, cuts, t_max, times) -> np.ndarray:
    """Piecewise-constant density: interval mass divided by interval length."""
    lengths = interval_lengths(cuts, t_max)
    probs = _check_probs(probs, lengths.shape[0])
    idx = interval_index(times, cuts, t_max)
    probs2 = np.atleast_2d(probs)
    if probs2.shape[0] == 1:
        probs2 = np.broadcast_to(probs2, (idx.shape[0], lengths.shape[0]))
    return probs2[np.arange(idx.shape[0]), idx] / lengths[idx]


def hard_survival(probs, cuts, t_max, times) -> np.ndarray:
    """Survival of the piecewise-constant model, linear within intervals.

    S(t) = 1 - (mass of intervals ending before t) - (fractional mass of
    the interval containing t).
    """
    lengths = interval_lengths(cuts, t_max)
    probs = _check_probs(probs, lengths.shape[0])
    idx = interval_index(times, cuts, t_max)
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    full = np.concatenate([[0.0], np.asarray(cuts, dtype=np.float64), [t_max]])
    probs2 = np.atleast_2d(probs)
    if probs2.shape[0] == 1:
        probs2 = np.broadcast_to(probs2, (idx.shape[0], lengths.shape[0]))
    cum = np.cumsum(probs2, axis=1)
    rows = np.arange(idx.shape[0])
    before = np.where(idx > 0, cum[rows, np.maximum(idx - 1, 0)], 0.0)
    frac = probs2[rows, idx] * (times - full[idx]) / lengths[idx]
    return np.clip(1.0 - before - frac, 0.0, 1.0)


def smooth_membership(cuts, t_max, times, tau) -> np.ndarray:
    """Sigmoid relaxation of the interval indicators, shape (n, M+1).

    Entry (i, j) is sigmoid((t_i - c_j)/tau) * sigmoid((c_{j+1} - t_i)/tau),
    a bump that tends to the indicator of interval j as tau -> 0.
    """
    _validate_tau(tau)
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    full = np.concatenate([[0.0], np.asarray(cuts, dtype=np.float64), [t_max]])
    if not np.all(np.diff(full) > 0):
        raise ValueError("cut points must be strictly increasing within (0, t_max)")
    lo = full[:-1]
    hi = full[1:]
    u = (times[:, None] - lo[None, :]) / tau
    v = (hi[None, :] - times[:, None]) / tau
    return _sigmoid(u) * _sigmoid(v)


def segment_integrals(cuts, t_max, times, tau) -> np.ndarray:
    """Closed-form integral of each smooth membership bump from 0 to t.

    Uses the identity sig(u) * sig(c - u) = (sig(u) - sig(u - c)) / (1 - exp(-c))
    with softplus antiderivatives. The denominator is computed with expm1,
    which also yields the correct unit limit for wide intervals.
    """
    _validate_tau(tau)
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    full = np.concatenate([[0.0], np.asarray(cuts, dtype=np.float64), [t_max]])
    if not np.all(np.diff(full) > 0):
        raise ValueError("cut points must be strictly increasing within (0, t_max)")
    lo = full[:-1]
    hi = full[1:]
    c = (hi - lo) / tau
    denom = -np.expm1(-c)
    upper = _softplus((times[:, None] - lo[None, :]) / tau) - _softplus(
        (times[:, None] - hi[None, :]) / tau
    )
    at_zero = _softplus(-lo / tau) - _softplus(-hi / tau)
    return tau * (upper - at_zero[None, :]) / denom[None, :]


def relaxed_density(probs, cuts, t_max, times, tau) -> np.ndarray:
    """Density of the sigmoid-relaxed model at the given times."""
    lengths = interval_lengths(cuts, t_max)
    probs = _check_probs(probs, lengths.shape[0])
    g = smooth_membership(cuts, t_max, times, tau)
    probs2 = np.atleast_2d(probs)
    if probs2.shape[0] == 1:
        probs2 = np.broadcast_to(probs2, g.shape)
    return np.sum(probs2 * g / lengths[None, :], axis=1)


def relaxed_survival(probs, cuts, t_max, times, tau) -> np.ndarray:
    """Survival of the relaxed model, one minus the integrated density.

    The integral of every membership bump is available in closed form, so
    no quadrature is involved. Values are clamped into [0, 1]; the raw
    value can stray outside by O(tau) because the relaxed density is only
    approximately normalized.
    """
    lengths = interval_lengths(cuts, t_max)
    probs = _check_probs(probs, lengths.shape[0])
    seg = segment_integrals(cuts, t_max, times, tau)
    probs2 = np.atleast_2d(probs)
    if probs2.shape[0] == 1:
        probs2 = np.broadcast_to(probs2, seg.shape)
    acc = np.sum(probs2 * seg / lengths[None, :], axis=1)
    return np.clip(1.0 - acc, 0.0, 1.0)


def beta_regularizer(cuts, t_max, form: str = "log_pdf") -> float:
    """Spacing regularizer: each cut scored by a Beta(1.5, 1.5) placed on
    the span between its two neighbors (boundaries 0 and t_max included).

    form "log_pdf" sums log densities, form "pdf" sums raw densities.
    Larger is better; the training loss subtracts this term.
    """
    u = _relative_positions(cuts, t_max)
    if form == "log_pdf":
        return float(np.sum(_LOG_8_OVER_PI + 0.5 * np.log(u * (1.0 - u))))
    if form == "pdf":
        return float(np.sum(_8_OVER_PI * np.sqrt(u * (1.0 - u))))
    raise ValueError(f"unknown regularizer form {form!r}")


def beta_regularizer_grad(cuts, t_max, form: str = "log_pdf") -> np.ndarray:
    """Exact gradient of beta_regularizer with respect to each interior cut.

    Each cut appears in its own term and as a neighbor in the adjacent
    terms; all three contributions are included.
    """
    cuts = np.asarray(cuts, dtype=np.float64)
    m = cuts.shape[0]
    full = np.concatenate([[0.0], cuts, [t_max]])
    prev = full[:-2]
    nxt = full[2:]
    span = nxt - prev
    u = (cuts - prev) / span
    if form == "log_pdf":
        dterm_du = 0.5 / u - 0.5 / (1.0 - u)
    elif form == "pdf":
        dterm_du = _8_OVER_PI * (1.0 - 2.0 * u) / (2.0 * np.sqrt(u * (1.0 - u)))
    else:
        raise ValueError(f"unknown regularizer form {form!r}")
    grad = dterm_du / span
    # cut k is the right neighbor of term k-1 and the left neighbor of term k+1
    if m > 1:
        du_dnext = -(cuts[:-1] - prev[:-1]) / span[:-1] ** 2
        grad[1:] += dterm_du[:-1] * du_dnext
        du_dprev = -(nxt[1:] - cuts[1:]) / span[1:] ** 2
        grad[:-1] += dterm_du[1:] * du_dprev
    return grad


def project_cutpoints(raw, t_max, min_gap=None) -> np.ndarray:
    """Map an arbitrary cut vector to the nearest valid configuration.

    Sorts ascending, then sweeps left to right clamping each cut into
    [previous + min_gap, t_max - (cuts remaining including this one) * min_gap].
    Idempotent on already valid inputs.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 1:
        raise ValueError("cut points must be a 1-d array")
    if not np.all(np.isfinite(raw)):
        raise ValueError("cut points must be finite")
    m = raw.shape[0]
    if min_gap is None:
        min_gap = DEFAULT_MIN_GAP_FRACTION * t_max
    if min_gap <= 0:
        raise ValueError("min_gap must be positive")
    if t_max <= (m + 1) * min_gap:
        raise ValueError(
            f"cannot place {m} cuts with min_gap {min_gap} inside (0, {t_max})"
        )
    out = np.sort(raw)
    prev = 0.0
    for i in range(m):
        lo = prev + min_gap
        hi = t_max - (m - i) * min_gap
        out[i] = min(max(out[i], lo), hi)
        prev = out[i]
    return out


def _relative_positions(cuts, t_max):
    cuts = np.asarray(cuts, dtype=np.float64)
    if cuts.shape[0] < 1:
        raise ValueError("beta regularizer needs at least one interior cut")
    full = np.concatenate([[0.0], cuts, [t_max]])
    if not np.all(np.diff(full) > 0):
        raise ValueError("cut points must be strictly increasing within (0, t_max)")
    prev = full[:-2]
    nxt = full[2:]
    return (cuts - prev) / (nxt - prev)


def _validate_tau(tau):
    if not np.isfinite(tau) or tau <= 0:
        raise ValueError(f"tau must be finite and positive, got {tau}")


def _sigmoid(x):
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _softplus(x):
    return np.logaddexp(0.0, x)
