"""Synthetic censored datasets with cluster-determined event-time regimes.

Both generators tie event-time distributions to interleaved half-moon
feature clusters, so a model must learn a nonlinear classifier and the
time-axis partition jointly. Observed time is min(event, censor) and the
event flag marks event < censor; latent draws are exposed for testing.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import betaincinv

T_MAX = 100.0
TWO_INTERVAL_CUTS = (67.0,)
FOUR_INTERVAL_CUTS = (10.0, 30.0, 70.0)
FOUR_INTERVAL_BOUNDS = (0.0, 10.0, 30.0, 70.0, 100.0)


@dataclass(frozen=True)
class SimulatedData:
    dataset: "SurvivalDataset"
    true_cuts: np.ndarray
    clusters: np.ndarray
    event_times: np.ndarray = None
    censor_times: np.ndarray = None


def _half_moons(n_outer, n_inner, rng, noise, x_offset=0.0):
    # outer arc of radius 1, inner arc reflected and shifted by (1, -0.5)
    to = np.linspace(0.0, np.pi, n_outer)
    ti = np.linspace(0.0, np.pi, n_inner)
    x = np.concatenate([np.cos(to), 1.0 - np.cos(ti)])
    y = np.concatenate([np.sin(to), 1.0 - np.sin(ti) - 0.5])
    pts = np.column_stack([x, y])
    pts += rng.normal(0.0, noise, pts.shape)
    pts[:, 0] += x_offset
    return pts


def simulate_two_interval(n, seed, noise=0.1, return_latents=False) -> SimulatedData:
    """Two half-moon clusters; uniform event times on (0, 67] and (67, 100].

    Censoring is uniform on (0, 100]; t_max is fixed at 100.
    """
    from .data import SurvivalDataset

    if n < 2:
        raise ValueError("need at least 2 records")
    rng = np.random.default_rng(seed)
    n0 = n // 2
    n1 = n - n0
    feats = _half_moons(n0, n1, rng, noise)
    clusters = np.concatenate([np.zeros(n0, dtype=np.int64), np.ones(n1, dtype=np.int64)])
    u = rng.random(n)
    event_t = np.where(clusters == 0, 67.0 * (1.0 - u), 100.0 - 33.0 * u)
    censor_t = T_MAX * (1.0 - rng.random(n))
    times = np.minimum(event_t, censor_t)
    events = (event_t < censor_t).astype(np.int64)
    ds = SurvivalDataset(feats, times, events, t_max=T_MAX)
    return SimulatedData(
        dataset=ds,
        true_cuts=np.array(TWO_INTERVAL_CUTS),
        clusters=clusters,
        event_times=event_t if return_latents else None,
        censor_times=censor_t if return_latents else None,
    )


def simulate_four_interval(n, seed, noise=0.1, return_latents=False) -> SimulatedData:
    """Four clusters from two half-moon pairs (second pair shifted +4 in x);
    event times are Beta(1.5, 1.5) draws scaled into (0,10], (10,30],
    (30,70] and (70,100] by cluster. Censoring is uniform on (0, 100].
    """
    from .data import SurvivalDataset

    if n < 4:
        raise ValueError("need at least 4 records")
    rng = np.random.default_rng(seed)
    sizes = [n // 4] * 4
    for k in range(n % 4):
        sizes[k] += 1
    pair_a = _half_moons(sizes[0], sizes[1], rng, noise)
    pair_b = _half_moons(sizes[2], sizes[3], rng, noise, x_offset=4.0)
    feats = np.vstack([pair_a, pair_b])
    clusters = np.concatenate(
        [np.full(sizes[k], k, dtype=np.int64) for k in range(4)]
    )
    # inverse-CDF Beta(1.5, 1.5) sampling on a seeded uniform stream;
    # 1 - u keeps the scaled times inside the half-open cluster interval
    u = rng.random(n)
    b = betaincinv(1.5, 1.5, 1.0 - u)
    lo = np.asarray(FOUR_INTERVAL_BOUNDS)[clusters]
    hi = np.asarray(FOUR_INTERVAL_BOUNDS)[clusters + 1]
    event_t = lo + (hi - lo) * b
    censor_t = T_MAX * (1.0 - rng.random(n))
    times = np.minimum(event_t, censor_t)
    events = (event_t < censor_t).astype(np.int64)
    ds = SurvivalDataset(feats, times, events, t_max=T_MAX)
    return SimulatedData(
        dataset=ds,
        true_cuts=np.array(FOUR_INTERVAL_CUTS),
        clusters=clusters,
        event_times=event_t if return_latents else None,
        censor_times=censor_t if return_latents else None,
    )


GENERATORS = {
    "two_interval": simulate_two_interval,
    "four_interval": simulate_four_interval,
}
