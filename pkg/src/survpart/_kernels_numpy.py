"""Pure-numpy implementations of the hot kernels.

These are the reference semantics for the numba twins in _kernels_numba:
the censored negative log-likelihood of the sigmoid-relaxed model with
exact reverse-mode gradients for all network parameters and interior cut
points, and the discrete concordance pair scan.
"""

import numpy as np

SURVIVAL_FLOOR = 1e-12


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _softplus(x):
    return np.logaddexp(0.0, x)


def _forward_terms(x, y, w1, b1, w2, b2, cuts, t_max, tau):
    kk = cuts.shape[0] + 1
    full = np.empty(kk + 1)
    full[0] = 0.0
    full[1:kk] = cuts
    full[kk] = t_max
    lo = full[:-1]
    hi = full[1:]
    length = hi - lo

    a1 = x @ w1.T + b1
    hid = np.maximum(a1, 0.0)
    logits = hid @ w2.T + b2
    zmax = logits.max(axis=1, keepdims=True)
    ez = np.exp(logits - zmax)
    probs = ez / ez.sum(axis=1, keepdims=True)

    u = (y[:, None] - lo[None, :]) / tau
    v = (hi[None, :] - y[:, None]) / tau
    su = _sigmoid(u)
    sv = _sigmoid(v)
    memb = su * sv

    c = length / tau
    denom = -np.expm1(-c)
    ecneg = np.exp(-c)
    n_term = (
        _softplus(u)
        - _softplus(-v)
        - _softplus(-lo / tau)[None, :]
        + _softplus(-hi / tau)[None, :]
    )
    seg = tau * n_term / denom[None, :]
    return lo, hi, length, a1, hid, probs, su, sv, memb, denom, ecneg, n_term, seg


def nll_loss(x, y, s, w1, b1, w2, b2, cuts, t_max, tau):
    """Mean censored NLL of the relaxed model; also counts survival floors."""
    (_, _, length, _, _, probs, _, _, memb, _, _, _, seg) = _forward_terms(
        x, y, w1, b1, w2, b2, cuts, t_max, tau
    )
    dens = (probs * (memb / length[None, :])).sum(axis=1)
    acc = (probs * (seg / length[None, :])).sum(axis=1)
    surv = 1.0 - acc
    floored = surv < SURVIVAL_FLOOR
    n_floor = int(np.sum(floored & (s == 0)))
    surv = np.maximum(surv, SURVIVAL_FLOOR)
    loss = -np.mean(s * np.log(dens) + (1.0 - s) * np.log(surv))
    return loss, n_floor


def nll_loss_grads(x, y, s, w1, b1, w2, b2, cuts, t_max, tau, want_cut_grads):
    """NLL with exact gradients for w1, b1, w2, b2 and the interior cuts.

    Cut gradients are skipped (returned as zeros) when want_cut_grads is
    false; parameter gradients are identical either way.
    """
    nbatch = x.shape[0]
    m = cuts.shape[0]
    (lo, hi, length, a1, hid, probs, su, sv, memb, denom, ecneg, n_term, seg) = (
        _forward_terms(x, y, w1, b1, w2, b2, cuts, t_max, tau)
    )
    memb_l = memb / length[None, :]
    seg_l = seg / length[None, :]
    dens = (probs * memb_l).sum(axis=1)
    acc = (probs * seg_l).sum(axis=1)
    surv = 1.0 - acc
    floored = surv < SURVIVAL_FLOOR
    n_floor = int(np.sum(floored & (s == 0)))
    surv = np.maximum(surv, SURVIVAL_FLOOR)
    loss = -np.mean(s * np.log(dens) + (1.0 - s) * np.log(surv))

    inv_b = 1.0 / nbatch
    dloss_ddens = -(s / dens) * inv_b
    dloss_dsurv = -((1.0 - s) / surv) * inv_b
    dloss_dsurv[floored] = 0.0
    dloss_dacc = -dloss_dsurv

    dprobs = dloss_ddens[:, None] * memb_l + dloss_dacc[:, None] * seg_l
    dot = (dprobs * probs).sum(axis=1, keepdims=True)
    dlogits = probs * (dprobs - dot)
    dw2 = dlogits.T @ hid
    db2 = dlogits.sum(axis=0)
    dhid = dlogits @ w2
    da1 = np.where(a1 > 0.0, dhid, 0.0)
    dw1 = da1.T @ x
    db1 = da1.sum(axis=0)

    dcuts = np.zeros(m)
    if want_cut_grads and m > 0:
        dmemb_dlo = -(su * (1.0 - su)) * sv / tau
        dmemb_dhi = su * (sv * (1.0 - sv)) / tau
        sig_lo0 = _sigmoid(-lo / tau)
        sig_hi0 = _sigmoid(-hi / tau)
        sig_yhi = 1.0 - sv
        d2 = denom * denom
        dseg_dlo = ((sig_lo0[None, :] - su) * denom[None, :] + n_term * ecneg[None, :]) / d2[None, :]
        dseg_dhi = ((sig_yhi - sig_hi0[None, :]) * denom[None, :] - n_term * ecneg[None, :]) / d2[None, :]
        wf = dloss_ddens[:, None] * probs
        wq = dloss_dacc[:, None] * probs
        l1 = length[None, :]
        l2 = (length * length)[None, :]
        term_hi = (wf * (dmemb_dhi / l1 - memb / l2) + wq * (dseg_dhi / l1 - seg / l2)).sum(axis=0)
        term_lo = (wf * (dmemb_dlo / l1 + memb / l2) + wq * (dseg_dlo / l1 + seg / l2)).sum(axis=0)
        dcuts = term_hi[:m] + term_lo[1:]
    return loss, dw1, db1, dw2, db2, dcuts, n_floor


def concordance_counts(surv_through, z, events):
    """Concordant mass and comparable-pair count for the discrete c-index.

    Pair (i, j) is comparable when record i is an event and its interval
    index is strictly earlier than j's; it scores by comparing survival
    through interval z_i, with exact ties worth one half.
    """
    n = z.shape[0]
    num = 0.0
    den = 0
    for i in range(n):
        if events[i] != 1:
            continue
        zi = z[i]
        later = z > zi
        cnt = int(np.sum(later))
        if cnt == 0:
            continue
        den += cnt
        si = surv_through[i, zi]
        sj = surv_through[later, zi]
        num += float(np.sum(si < sj)) + 0.5 * float(np.sum(si == sj))
    return num, den
