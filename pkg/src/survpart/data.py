"""Right-censored survival data: containers, Kaplan-Meier estimation,
cut-point initializers, deterministic splitting, and CSV round-trips.
"""

import csv
import hashlib
import warnings
from dataclasses import dataclass

import numpy as np

from .partition import CutPoints, project_cutpoints


@dataclass(frozen=True)
class SurvivalRecord:
    features: np.ndarray
    observed_time: float
    event: int

    def __post_init__(self):
        object.__setattr__(
            self, "features", np.asarray(self.features, dtype=np.float64)
        )
        if self.features.ndim != 1:
            raise ValueError("features must be a 1-d vector")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")
        if not np.isfinite(self.observed_time) or self.observed_time <= 0:
            raise ValueError(f"observed_time must be positive, got {self.observed_time}")
        if self.event not in (0, 1):
            raise ValueError(f"event flag must be 0 or 1, got {self.event}")


class SurvivalDataset:
    """Array-backed collection of censored observations on (0, t_max]."""

    def __init__(self, features, times, events, t_max=None):
        features = np.asarray(features, dtype=np.float64)
        times = np.asarray(times, dtype=np.float64)
        events = np.asarray(events)
        if features.ndim != 2:
            raise ValueError("features must be a 2-d array of shape (n, p)")
        n = features.shape[0]
        if n == 0:
            raise ValueError("dataset must contain at least one record")
        if times.shape != (n,) or events.shape != (n,):
            raise ValueError("features, times and events must agree on length")
        if not np.all(np.isfinite(features)):
            raise ValueError("features must be finite")
        if not np.all(np.isfinite(times)) or np.any(times <= 0):
            raise ValueError("observed times must be finite and positive")
        ev = events.astype(np.int64)
        if not np.all((ev == 0) | (ev == 1)):
            raise ValueError("event flags must be 0 or 1")
        if t_max is None:
            t_max = float(times.max())
        t_max = float(t_max)
        if not np.isfinite(t_max) or t_max <= 0:
            raise ValueError(f"t_max must be finite and positive, got {t_max}")
        if np.any(times > t_max):
            raise ValueError("observed times must not exceed t_max")
        self.features = features
        self.times = times
        self.events = ev
        self.t_max = t_max

    @classmethod
    def from_records(cls, records, t_max=None):
        if len(records) == 0:
            raise ValueError("dataset must contain at least one record")
        feats = np.stack([r.features for r in records])
        times = np.array([r.observed_time for r in records], dtype=np.float64)
        events = np.array([r.event for r in records], dtype=np.int64)
        return cls(feats, times, events, t_max=t_max)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    def record(self, i: int) -> SurvivalRecord:
        return SurvivalRecord(self.features[i], float(self.times[i]), int(self.events[i]))

    def __len__(self):
        return self.n

    def __iter__(self):
        for i in range(self.n):
            yield self.record(i)

    def subset(self, idx, t_max=None):
        idx = np.asarray(idx)
        return SurvivalDataset(
            self.features[idx],
            self.times[idx],
            self.events[idx],
            t_max=self.t_max if t_max is None else t_max,
        )

    def fingerprint(self) -> str:
        """Content hash used for provenance tracking of trained models."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.features).tobytes())
        h.update(np.ascontiguousarray(self.times).tobytes())
        h.update(np.ascontiguousarray(self.events).tobytes())
        h.update(np.float64(self.t_max).tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class KMCurve:
    """Product-limit survival estimate: step function dropping at event times."""

    times: np.ndarray
    survival: np.ndarray
    n_events: int
    n_records: int

    def evaluate(self, t) -> np.ndarray:
        """Step-function value S(t); 1 before the first event time."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.times.shape[0] == 0:
            return np.ones(t.shape[0])
        idx = np.searchsorted(self.times, t, side="right") - 1
        out = np.where(idx >= 0, self.survival[np.maximum(idx, 0)], 1.0)
        return out


def kaplan_meier(dataset: SurvivalDataset) -> KMCurve:
    """Kaplan-Meier product-limit estimator over the dataset.

    With zero events the curve is constant 1 (empty step list); that is a
    legitimate estimate under total censoring, not an error.
    """
    times = dataset.times
    events = dataset.events
    if events.sum() == 0:
        return KMCurve(
            times=np.empty(0), survival=np.empty(0), n_events=0, n_records=dataset.n
        )
    event_times = np.unique(times[events == 1])
    surv = np.empty(event_times.shape[0])
    acc = 1.0
    for k, t in enumerate(event_times):
        d = np.sum((times == t) & (events == 1))
        at_risk = np.sum(times >= t)
        acc *= 1.0 - d / at_risk
        surv[k] = acc
    return KMCurve(
        times=event_times,
        survival=surv,
        n_events=int(events.sum()),
        n_records=dataset.n,
    )


def km_quantile_cutpoints(dataset: SurvivalDataset, m: int, min_gap=None) -> CutPoints:
    """Cut points at evenly spaced survival levels of the Kaplan-Meier curve.

    Cut k sits at the first event time where the curve drops to or below
    1 - k/(m+1). Levels the curve never reaches are filled by linear
    interpolation between the last curve point and (t_max, 0), with a
    warning; the result is projected to keep cuts distinct and interior.
    """
    _check_cut_count(m)
    curve = kaplan_meier(dataset)
    t_max = dataset.t_max
    levels = 1.0 - np.arange(1, m + 1) / (m + 1)
    raw = np.empty(m)
    fallback = 0
    if curve.n_events == 0:
        t_last, s_last = 0.0, 1.0
    else:
        t_last, s_last = curve.times[-1], curve.survival[-1]
    for k, level in enumerate(levels):
        reached = np.nonzero(curve.survival <= level)[0] if curve.n_events else []
        if len(reached) > 0:
            raw[k] = curve.times[reached[0]]
        else:
            raw[k] = t_last + (t_max - t_last) * (s_last - level) / s_last
            fallback += 1
    if fallback:
        warnings.warn(
            f"Kaplan-Meier curve never reached {fallback} of {m} requested levels; "
            "placed those cut points by interpolation toward t_max"
        )
    return CutPoints(project_cutpoints(raw, t_max, min_gap), t_max)


def observed_quantile_cutpoints(dataset: SurvivalDataset, m: int, min_gap=None) -> CutPoints:
    """Cut points at evenly spaced quantiles of the observed times,
    ignoring event flags. Default initializer for training."""
    _check_cut_count(m)
    qs = np.arange(1, m + 1) / (m + 1)
    raw = np.quantile(dataset.times, qs)
    return CutPoints(project_cutpoints(raw, dataset.t_max, min_gap), dataset.t_max)


def even_time_cutpoints(t_max: float, m: int, min_gap=None) -> CutPoints:
    """Cut points evenly spaced on the time axis itself."""
    _check_cut_count(m)
    raw = t_max * np.arange(1, m + 1) / (m + 1)
    return CutPoints(project_cutpoints(raw, t_max, min_gap), t_max)


def split(dataset: SurvivalDataset, fractions, seed):
    """Deterministic shuffle split into (train, val, test).

    Validation and test sizes are floored; the remainder goes to train.
    Every part must end up non-empty.
    """
    fractions = np.asarray(fractions, dtype=np.float64)
    if fractions.shape != (3,):
        raise ValueError("fractions must be (train, val, test)")
    if np.any(fractions <= 0) or abs(fractions.sum() - 1.0) > 1e-9:
        raise ValueError(f"fractions must be positive and sum to 1, got {fractions}")
    n = dataset.n
    n_val = int(np.floor(n * fractions[1]))
    n_test = int(np.floor(n * fractions[2]))
    n_train = n - n_val - n_test
    if min(n_train, n_val, n_test) < 1:
        raise ValueError(f"split of {n} records leaves an empty part")
    perm = np.random.default_rng(seed).permutation(n)
    tr = perm[:n_train]
    va = perm[n_train : n_train + n_val]
    te = perm[n_train + n_val :]
    return dataset.subset(tr), dataset.subset(va), dataset.subset(te)


def load_csv(
    path,
    time_column: str = "time",
    event_column: str = "event",
    feature_columns=None,
    t_max=None,
) -> SurvivalDataset:
    """Read a dataset from CSV with UTF-8 text and '.' decimals.

    Unless given, feature columns are every column other than the time and
    event columns, in file order, and t_max is the largest observed time.
    Malformed values raise CSVParseError naming the 1-based data row.
    """
    from .errors import CSVParseError

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CSVParseError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        for col in (time_column, event_column):
            if col not in header:
                raise CSVParseError(f"{path}: missing column {col!r}")
        if feature_columns is None:
            feature_columns = [h for h in header if h not in (time_column, event_column)]
        if len(feature_columns) == 0:
            raise CSVParseError(f"{path}: no feature columns")
        missing = [c for c in feature_columns if c not in header]
        if missing:
            raise CSVParseError(f"{path}: missing feature columns {missing}")
        pos = {c: header.index(c) for c in header}
        feats, times, events = [], [], []
        for rownum, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise CSVParseError(
                    f"{path} row {rownum}: expected {len(header)} fields, got {len(row)}",
                    row=rownum,
                )
            try:
                t = float(row[pos[time_column]])
                e = float(row[pos[event_column]])
                x = [float(row[pos[c]]) for c in feature_columns]
            except ValueError as exc:
                raise CSVParseError(f"{path} row {rownum}: {exc}", row=rownum) from None
            if not np.isfinite(t) or t <= 0:
                raise CSVParseError(
                    f"{path} row {rownum}: observed time must be positive, got {t}",
                    row=rownum,
                )
            if e not in (0.0, 1.0):
                raise CSVParseError(
                    f"{path} row {rownum}: event flag must be 0 or 1, got {e}",
                    row=rownum,
                )
            if not all(np.isfinite(v) for v in x):
                raise CSVParseError(
                    f"{path} row {rownum}: non-finite feature value", row=rownum
                )
            feats.append(x)
            times.append(t)
            events.append(int(e))
    if len(times) == 0:
        raise CSVParseError(f"{path}: no data rows")
    return SurvivalDataset(
        np.array(feats), np.array(times), np.array(events), t_max=t_max
    )


def save_csv(dataset: SurvivalDataset, path, feature_names=None):
    """Write the dataset to CSV; inverse of load_csv under default naming."""
    if feature_names is None:
        feature_names = [f"f{j}" for j in range(dataset.p)]
    if len(feature_names) != dataset.p:
        raise ValueError("feature_names length must match feature count")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(feature_names) + ["time", "event"])
        for i in range(dataset.n):
            writer.writerow(
                [repr(float(v)) for v in dataset.features[i]]
                + [repr(float(dataset.times[i])), str(int(dataset.events[i]))]
            )


def _check_cut_count(m):
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"number of cut points must be a positive integer, got {m}")
