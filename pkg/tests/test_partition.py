"""Partition module tests.

The first test verifies the sigmoid product identity numerically; it is
the oracle that justifies the closed-form survival integral, so it comes
before anything that relies on segment_integrals.
"""

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from survpart.partition import (
    DEFAULT_MIN_GAP_FRACTION,
    CutPoints,
    beta_regularizer,
    beta_regularizer_grad,
    hard_density,
    hard_survival,
    interval_index,
    interval_lengths,
    project_cutpoints,
    relaxed_density,
    relaxed_survival,
    segment_integrals,
    smooth_membership,
)

T_MAX = 100.0


def _sig(x):
    x = np.asarray(x, dtype=np.float64)
    return np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))), np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))


def test_sigmoid_product_identity_oracle():
    """sig(u) * sig(c - u) == (sig(u) - sig(u - c)) / (1 - exp(-c)).

    Everything downstream (closed-form survival, cut gradients) leans on
    this factorization, so it is checked first and over a wide range.
    """
    rng = np.random.default_rng(0)
    u = rng.uniform(-60.0, 60.0, 4000)
    c = rng.uniform(1e-3, 120.0, 4000)
    lhs = _sig(u) * _sig(c - u)
    rhs = (_sig(u) - _sig(u - c)) / (-np.expm1(-c))
    assert np.max(np.abs(lhs - rhs)) < 1e-14


def test_segment_integral_matches_quadrature_per_bump():
    # each closed-form bump integral against scipy quad, one interval at a time
    cuts = np.array([20.0, 55.0])
    tau = 1.5
    full = np.concatenate([[0.0], cuts, [T_MAX]])
    for y in (3.0, 20.0, 41.7, 90.0):
        seg = segment_integrals(cuts, T_MAX, np.array([y]), tau)[0]
        for j in range(3):
            lo, hi = full[j], full[j + 1]
            val, _ = scipy.integrate.quad(
                lambda t: float(_sig((t - lo) / tau) * _sig((hi - t) / tau)),
                0.0, y, limit=200,
            )
            assert abs(seg[j] - val) < 1e-9


def test_interval_lengths_examples():
    assert np.allclose(interval_lengths(np.array([67.0]), T_MAX), [67.0, 33.0])
    assert np.allclose(
        interval_lengths(np.array([10.0, 30.0, 70.0]), T_MAX), [10.0, 20.0, 40.0, 30.0]
    )
    assert np.allclose(interval_lengths(np.empty(0), T_MAX), [100.0])
    assert interval_lengths(np.array([10.0, 30.0, 70.0]), T_MAX).sum() == T_MAX


def test_interval_lengths_rejects_disorder():
    with pytest.raises(ValueError):
        interval_lengths(np.array([30.0, 10.0]), T_MAX)


def test_interval_index_right_closed():
    cuts = np.array([67.0])
    idx = interval_index([30.0, 67.0, 67.0000001, 100.0], cuts, T_MAX)
    # an exact hit on a cut point lands in the earlier interval
    assert idx.tolist() == [0, 0, 1, 1]
    with pytest.raises(ValueError):
        interval_index([0.0], cuts, T_MAX)
    with pytest.raises(ValueError):
        interval_index([100.5], cuts, T_MAX)


def test_hard_density_examples():
    cuts = np.array([67.0])
    assert np.isclose(hard_density([1.0, 0.0], cuts, T_MAX, [30.0])[0], 1.0 / 67.0)
    assert np.isclose(hard_density([0.5, 0.5], cuts, T_MAX, [80.0])[0], 0.5 / 33.0)
    # boundary convention: t = 67 belongs to the first interval
    assert np.isclose(hard_density([0.5, 0.5], cuts, T_MAX, [67.0])[0], 0.5 / 67.0)


def test_hard_density_checks_probs():
    with pytest.raises(ValueError):
        hard_density([0.7, 0.7], np.array([67.0]), T_MAX, [30.0])
    with pytest.raises(ValueError):
        hard_density([0.5, 0.5, 0.0], np.array([67.0]), T_MAX, [30.0])


def test_hard_survival_examples():
    probs = [0.25, 0.25, 0.25, 0.25]
    cuts = np.array([10.0, 30.0, 70.0])
    # y = 50 sits 20/40 of the way through the third interval
    assert np.isclose(hard_survival(probs, cuts, T_MAX, [50.0])[0], 0.375)
    for j, c in enumerate(cuts):
        assert np.isclose(hard_survival(probs, cuts, T_MAX, [c])[0], 1.0 - 0.25 * (j + 1))
    assert np.isclose(hard_survival(probs, cuts, T_MAX, [T_MAX])[0], 0.0)


def test_hard_survival_density_consistency():
    # survival plus accumulated density mass is exactly 1 at any y
    rng = np.random.default_rng(3)
    cuts = np.array([10.0, 30.0, 70.0])
    lengths = interval_lengths(cuts, T_MAX)
    probs = rng.dirichlet(np.ones(4))
    full = np.concatenate([[0.0], cuts, [T_MAX]])
    for y in rng.uniform(0.01, 100.0, 50):
        j = int(interval_index([y], cuts, T_MAX)[0])
        mass = probs[:j].sum() + probs[j] * (y - full[j]) / lengths[j]
        s = hard_survival(probs, cuts, T_MAX, [y])[0]
        assert abs(s + mass - 1.0) < 1e-12


def test_smooth_membership_saturation_and_boundary():
    cuts = np.array([40.0])
    g = smooth_membership(cuts, T_MAX, [20.0], tau=0.5)[0]
    assert g[0] >= 0.999
    assert g[1] <= 1e-8
    # at t exactly on the cut both neighbors sit near one half
    g = smooth_membership(cuts, T_MAX, [40.0], tau=0.5)[0]
    assert abs(g[0] - 0.5) < 1e-9
    assert abs(g[1] - 0.5) < 1e-9


def test_smooth_membership_gradient_at_cut():
    # d membership_j / d c_j at t = c_j: finite difference vs hand derivative
    tau = 0.5
    c = 40.0
    t = c
    step = 1e-4 * tau

    def memb_first(cj):
        return smooth_membership(np.array([cj]), T_MAX, [t], tau)[0][0]

    fd = (memb_first(c + step) - memb_first(c - step)) / (2 * step)
    analytic = _sig((t - 0.0) / tau) * 0.25 / tau
    assert abs(fd - analytic) / abs(analytic) < 1e-6


def test_relaxed_density_hard_limit():
    cuts = np.array([67.0])
    probs = [0.3, 0.7]
    for t in (12.0, 50.0, 80.0):
        r = relaxed_density(probs, cuts, T_MAX, [t], tau=1e-4)[0]
        h = hard_density(probs, cuts, T_MAX, [t])[0]
        assert abs(r - h) < 1e-9


def test_relaxed_density_at_cut_worked_example():
    # at t on the cut both memberships are about one half
    val = relaxed_density([0.5, 0.5], np.array([67.0]), T_MAX, [67.0], tau=0.1)[0]
    expect = 0.5 * 0.5 / 67.0 + 0.5 * 0.5 / 33.0
    assert abs(val - expect) < 1e-4


def test_relaxed_density_continuous_in_cut_position():
    """Moving the cut across the evaluation point changes the relaxed
    density by O(eps/tau) while the hard density jumps by O(1)."""
    t = 50.0
    tau = 0.1
    probs = [0.2, 0.8]
    hard_jump = abs(
        hard_density(probs, np.array([t - 1e-3]), T_MAX, [t])[0]
        - hard_density(probs, np.array([t + 1e-3]), T_MAX, [t])[0]
    )
    assert hard_jump > 1e-3  # genuine discontinuity in the hard model
    for eps in (1e-3, 1e-4):
        lo = relaxed_density(probs, np.array([t - eps]), T_MAX, [t], tau)[0]
        hi = relaxed_density(probs, np.array([t + eps]), T_MAX, [t], tau)[0]
        diff = abs(hi - lo)
        lengths = interval_lengths(np.array([t]), T_MAX)
        bound = 4.0 * eps / tau * (probs[0] / lengths[0] + probs[1] / lengths[1])
        assert diff <= bound
        assert diff < hard_jump


def test_relaxed_survival_near_zero_is_one():
    cuts = np.array([67.0])
    s = relaxed_survival([0.5, 0.5], cuts, T_MAX, [1e-9], tau=0.1)[0]
    assert abs(s - 1.0) < 1e-6


def test_relaxed_survival_uniform_hand_integral():
    # all mass uniform on (0, 67]: survival at 33.5 is one half in the sharp limit
    s = relaxed_survival([1.0, 0.0], np.array([67.0]), T_MAX, [33.5], tau=1e-3)[0]
    assert abs(s - 0.5) < 1e-4


def test_relaxed_survival_quadrature_oracle():
    rng = np.random.default_rng(11)
    for _ in range(25):
        m = int(rng.integers(1, 4))
        cuts = project_cutpoints(np.sort(rng.uniform(1.0, 99.0, m)), T_MAX)
        probs = rng.dirichlet(np.ones(m + 1))
        tau = float(np.exp(rng.uniform(np.log(1e-3), np.log(1.0)))) * T_MAX
        y = float(rng.uniform(0.5, 100.0))
        s = relaxed_survival(probs, cuts, T_MAX, [y], tau)[0]
        integral, _ = scipy.integrate.quad(
            lambda t: float(relaxed_density(probs, cuts, T_MAX, [t], tau)[0]),
            0.0, y, points=[c for c in cuts if c < y], limit=400,
        )
        oracle = float(np.clip(1.0 - integral, 0.0, 1.0))
        assert abs(s - oracle) < 1e-6


def test_relaxed_density_total_mass_bound():
    # integral over the whole axis stays within the stated O(tau) window
    rng = np.random.default_rng(7)
    for _ in range(5):
        m = int(rng.integers(1, 4))
        cuts = project_cutpoints(np.sort(rng.uniform(5.0, 95.0, m)), T_MAX)
        probs = rng.dirichlet(np.ones(m + 1))
        tau = float(rng.uniform(0.05, 1.0))
        total, _ = scipy.integrate.quad(
            lambda t: float(relaxed_density(probs, cuts, T_MAX, [t], tau)[0]),
            0.0, T_MAX, points=list(cuts), limit=400,
        )
        delta = 4.0 * tau * np.sum(1.0 / interval_lengths(cuts, T_MAX))
        assert 1.0 - delta <= total <= 1.0 + delta


def test_relaxed_matches_hard_away_from_cuts_as_tau_shrinks():
    cuts = np.array([10.0, 30.0, 70.0])
    probs = [0.1, 0.2, 0.3, 0.4]
    grid = np.linspace(0.5, 99.5, 397)
    keep = np.ones(grid.shape[0], dtype=bool)
    taus = [0.5, 0.05, 0.005]
    gaps = []
    for tau in taus:
        for c in np.concatenate([[0.0], cuts]):
            keep &= np.abs(grid - c) > 8 * tau
        r = relaxed_density(probs, cuts, T_MAX, grid[keep], tau)
        h = hard_density(probs, cuts, T_MAX, grid[keep])
        gaps.append(np.max(np.abs(r - h)))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-6


def _density_cut_derivative(probs, cuts, t_max, t, tau, j):
    """Hand derivative of the relaxed density with respect to cut j.

    Cut j is the upper boundary of interval j and the lower boundary of
    interval j+1; each appearance contributes a sigmoid slope term and an
    interval-length term. Written from the defining formula, independent
    of the package internals.
    """
    full = np.concatenate([[0.0], cuts, [t_max]])
    out = 0.0
    for k in (j, j + 1):
        lo, hi = full[k], full[k + 1]
        ln = hi - lo
        su = float(_sig((t - lo) / tau))
        sv = float(_sig((hi - t) / tau))
        memb = su * sv
        if k == j:  # cut j is this interval's upper boundary
            dmemb = su * sv * (1.0 - sv) / tau
            dlen = 1.0
        else:  # cut j is this interval's lower boundary
            dmemb = -su * (1.0 - su) * sv / tau
            dlen = -1.0
        out += probs[k] * (dmemb / ln - memb * dlen / ln**2)
    return out


def test_relaxed_gradients_wrt_cuts_finite_difference():
    """Central differences on each interior cut, step 1e-4 * t_max, for
    both the relaxed density and the relaxed survival, including the
    configuration with the evaluation point exactly on a cut. The
    reference values are a hand product-rule derivative for the density
    and its quadrature integral for the survival."""
    step = 1e-4 * T_MAX
    rng = np.random.default_rng(5)
    cases = []
    for _ in range(5):
        m = int(rng.integers(1, 4))
        cuts = project_cutpoints(np.sort(rng.uniform(5.0, 95.0, m)), T_MAX)
        probs = rng.dirichlet(np.ones(m + 1))
        tau = float(rng.uniform(2.0, 6.0))
        cases.append((cuts, probs, tau, float(rng.uniform(1.0, 99.0))))
        cases.append((cuts, probs, tau, float(cuts[rng.integers(m)])))  # t on a cut
    for cuts, probs, tau, t in cases:
        for j in range(cuts.shape[0]):
            hi = cuts.copy()
            hi[j] += step
            lo = cuts.copy()
            lo[j] -= step

            fd_d = (
                relaxed_density(probs, hi, T_MAX, [t], tau)[0]
                - relaxed_density(probs, lo, T_MAX, [t], tau)[0]
            ) / (2 * step)
            an_d = _density_cut_derivative(probs, cuts, T_MAX, t, tau, j)
            assert abs(fd_d - an_d) / max(abs(fd_d), abs(an_d), 1e-8) < 1e-4

            fd_s = (
                relaxed_survival(probs, hi, T_MAX, [t], tau)[0]
                - relaxed_survival(probs, lo, T_MAX, [t], tau)[0]
            ) / (2 * step)
            an_s, _ = scipy.integrate.quad(
                lambda u: -_density_cut_derivative(probs, cuts, T_MAX, u, tau, j),
                0.0, t, points=[c for c in cuts if c < t], limit=400,
            )
            assert abs(fd_s - an_s) / max(abs(fd_s), abs(an_s), 1e-8) < 1e-4


def test_beta_regularizer_centered_value():
    # all cuts centered: each term is log BetaPDF(0.5) = log(4/pi)
    for m, cuts in ((1, np.array([50.0])), (3, np.array([25.0, 50.0, 75.0]))):
        h = beta_regularizer(cuts, T_MAX)
        assert abs(h - m * np.log(4.0 / np.pi)) < 1e-12


def test_beta_regularizer_prefers_centered_cut():
    assert beta_regularizer(np.array([50.0]), T_MAX) > beta_regularizer(
        np.array([10.0]), T_MAX
    )


def test_beta_regularizer_collapse_penalty_unbounded():
    vals = [beta_regularizer(np.array([c]), T_MAX) for c in (1.0, 0.01, 1e-4)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < -4.0


def test_beta_regularizer_pdf_form():
    # raw pdf form peaks at 4/pi per centered cut and stays positive
    assert abs(beta_regularizer(np.array([50.0]), T_MAX, form="pdf") - 4.0 / np.pi) < 1e-12
    assert beta_regularizer(np.array([1.0]), T_MAX, form="pdf") > 0.0
    with pytest.raises(ValueError):
        beta_regularizer(np.array([50.0]), T_MAX, form="sqrt")


@given(st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=40, deadline=None)
def test_beta_regularizer_scale_invariant(k):
    cuts = np.array([12.0, 40.0, 71.0])
    base = beta_regularizer(cuts, T_MAX)
    scaled = beta_regularizer(cuts * k, T_MAX * k)
    assert abs(base - scaled) < 1e-9


def test_beta_regularizer_grad_finite_difference():
    rng = np.random.default_rng(9)
    for form in ("log_pdf", "pdf"):
        for _ in range(8):
            m = int(rng.integers(1, 5))
            cuts = project_cutpoints(np.sort(rng.uniform(5.0, 95.0, m)), T_MAX)
            grad = beta_regularizer_grad(cuts, T_MAX, form)
            step = 1e-6 * T_MAX
            for j in range(m):
                hi = cuts.copy()
                hi[j] += step
                lo = cuts.copy()
                lo[j] -= step
                fd = (beta_regularizer(hi, T_MAX, form) - beta_regularizer(lo, T_MAX, form)) / (
                    2 * step
                )
                assert abs(fd - grad[j]) < 1e-6 * max(1.0, abs(grad[j]))


def test_project_cutpoints_examples():
    valid = np.array([20.0, 30.0])
    out = project_cutpoints(valid, T_MAX, min_gap=0.1)
    assert np.array_equal(out, valid)  # idempotent on valid input
    assert np.allclose(project_cutpoints(np.array([30.0, 20.0]), T_MAX, 0.1), [20.0, 30.0])
    assert np.allclose(
        project_cutpoints(np.array([99.9, 99.95]), T_MAX, 0.1), [99.8, 99.9]
    )


def test_project_cutpoints_infeasible():
    with pytest.raises(ValueError):
        project_cutpoints(np.linspace(1, 99, 30), T_MAX, min_gap=5.0)


@given(
    st.lists(st.floats(min_value=-50.0, max_value=150.0), min_size=1, max_size=8),
    st.floats(min_value=0.01, max_value=1.0),
)
@settings(max_examples=100, deadline=None)
def test_project_cutpoints_always_valid_and_idempotent(raw, min_gap):
    raw = np.asarray(raw)
    out = project_cutpoints(raw, T_MAX, min_gap)
    full = np.concatenate([[0.0], out, [T_MAX]])
    assert np.all(np.diff(full) >= min_gap - 1e-12)
    again = project_cutpoints(out, T_MAX, min_gap)
    assert np.allclose(out, again, atol=1e-12)


def test_cutpoints_invariants():
    c = CutPoints(np.array([10.0, 30.0]), T_MAX)
    assert c.m == 2
    assert np.allclose(c.full, [0.0, 10.0, 30.0, 100.0])
    assert np.allclose(c.lengths, [10.0, 20.0, 70.0])
    with pytest.raises(ValueError):
        CutPoints(np.array([30.0, 10.0]), T_MAX)
    with pytest.raises(ValueError):
        CutPoints(np.array([0.0]), T_MAX)
    with pytest.raises(ValueError):
        CutPoints(np.array([100.0]), T_MAX)
    with pytest.raises(ValueError):
        CutPoints(np.array([np.nan]), T_MAX)
    assert CutPoints(np.empty(0), T_MAX).m == 0


def test_default_min_gap_fraction():
    # projection default keeps cuts a fixed fraction of the horizon apart
    out = project_cutpoints(np.array([50.0, 50.0]), T_MAX)
    assert abs(out[1] - out[0] - DEFAULT_MIN_GAP_FRACTION * T_MAX) < 1e-12
