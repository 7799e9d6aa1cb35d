"""Numba-compiled twins of the kernels in _kernels_numpy.

Same signatures, same math, scalarized into explicit loops so the whole
batch step fuses into one compiled pass. Results agree with the numpy
backend to floating-point reassociation error only.
"""

import math

import numpy as np
from numba import njit

SURVIVAL_FLOOR = 1e-12


@njit(cache=True)
def _sig(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    ex = math.exp(x)
    return ex / (1.0 + ex)


@njit(cache=True)
def _sp(x):
    if x > 0.0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


@njit(cache=True)
def _interval_tables(cuts, t_max, tau):
    m = cuts.shape[0]
    kk = m + 1
    full = np.empty(kk + 1)
    full[0] = 0.0
    for j in range(m):
        full[j + 1] = cuts[j]
    full[kk] = t_max
    length = np.empty(kk)
    denom = np.empty(kk)
    ecneg = np.empty(kk)
    sig_lo0 = np.empty(kk)
    sig_hi0 = np.empty(kk)
    sp_lo0 = np.empty(kk)
    sp_hi0 = np.empty(kk)
    for j in range(kk):
        lo = full[j]
        hi = full[j + 1]
        ln = hi - lo
        length[j] = ln
        c = ln / tau
        denom[j] = -math.expm1(-c)
        ecneg[j] = math.exp(-c)
        sig_lo0[j] = _sig(-lo / tau)
        sig_hi0[j] = _sig(-hi / tau)
        sp_lo0[j] = _sp(-lo / tau)
        sp_hi0[j] = _sp(-hi / tau)
    return full, length, denom, ecneg, sig_lo0, sig_hi0, sp_lo0, sp_hi0


@njit(cache=True)
def nll_loss(x, y, s, w1, b1, w2, b2, cuts, t_max, tau):
    nb, p = x.shape
    h = w1.shape[0]
    kk = cuts.shape[0] + 1
    full, length, denom, _, _, _, sp_lo0, sp_hi0 = _interval_tables(cuts, t_max, tau)
    hid = np.empty(h)
    logits = np.empty(kk)
    probs = np.empty(kk)
    loss = 0.0
    n_floor = 0
    inv_b = 1.0 / nb
    for i in range(nb):
        for a in range(h):
            acc = b1[a]
            for b in range(p):
                acc += w1[a, b] * x[i, b]
            hid[a] = acc if acc > 0.0 else 0.0
        zmax = -1.0e308
        for j in range(kk):
            acc = b2[j]
            for a in range(h):
                acc += w2[j, a] * hid[a]
            logits[j] = acc
            if acc > zmax:
                zmax = acc
        ssum = 0.0
        for j in range(kk):
            e = math.exp(logits[j] - zmax)
            probs[j] = e
            ssum += e
        yi = y[i]
        dens = 0.0
        qacc = 0.0
        for j in range(kk):
            pj = probs[j] / ssum
            u = (yi - full[j]) / tau
            v = (full[j + 1] - yi) / tau
            memb = _sig(u) * _sig(v)
            nt = _sp(u) - _sp(-v) - sp_lo0[j] + sp_hi0[j]
            seg = tau * nt / denom[j]
            dens += pj * memb / length[j]
            qacc += pj * seg / length[j]
        surv = 1.0 - qacc
        if surv < SURVIVAL_FLOOR:
            if s[i] == 0.0:
                n_floor += 1
            surv = SURVIVAL_FLOOR
        if s[i] == 1.0:
            loss -= math.log(dens) * inv_b
        else:
            loss -= math.log(surv) * inv_b
    return loss, n_floor


@njit(cache=True)
def nll_loss_grads(x, y, s, w1, b1, w2, b2, cuts, t_max, tau, want_cut_grads):
    nb, p = x.shape
    h = w1.shape[0]
    m = cuts.shape[0]
    kk = m + 1
    full, length, denom, ecneg, sig_lo0, sig_hi0, sp_lo0, sp_hi0 = _interval_tables(
        cuts, t_max, tau
    )
    dw1 = np.zeros((h, p))
    db1 = np.zeros(h)
    dw2 = np.zeros((kk, h))
    db2 = np.zeros(kk)
    dterm_lo = np.zeros(kk)
    dterm_hi = np.zeros(kk)
    a1 = np.empty(h)
    hid = np.empty(h)
    logits = np.empty(kk)
    probs = np.empty(kk)
    su = np.empty(kk)
    sv = np.empty(kk)
    memb = np.empty(kk)
    seg = np.empty(kk)
    nterm = np.empty(kk)
    dprobs = np.empty(kk)
    dlog = np.empty(kk)
    loss = 0.0
    n_floor = 0
    inv_b = 1.0 / nb
    for i in range(nb):
        for a in range(h):
            acc = b1[a]
            for b in range(p):
                acc += w1[a, b] * x[i, b]
            a1[a] = acc
            hid[a] = acc if acc > 0.0 else 0.0
        zmax = -1.0e308
        for j in range(kk):
            acc = b2[j]
            for a in range(h):
                acc += w2[j, a] * hid[a]
            logits[j] = acc
            if acc > zmax:
                zmax = acc
        ssum = 0.0
        for j in range(kk):
            e = math.exp(logits[j] - zmax)
            probs[j] = e
            ssum += e
        yi = y[i]
        dens = 0.0
        qacc = 0.0
        for j in range(kk):
            probs[j] /= ssum
            u = (yi - full[j]) / tau
            v = (full[j + 1] - yi) / tau
            suj = _sig(u)
            svj = _sig(v)
            su[j] = suj
            sv[j] = svj
            memb[j] = suj * svj
            nt = _sp(u) - _sp(-v) - sp_lo0[j] + sp_hi0[j]
            nterm[j] = nt
            seg[j] = tau * nt / denom[j]
            dens += probs[j] * memb[j] / length[j]
            qacc += probs[j] * seg[j] / length[j]
        surv = 1.0 - qacc
        floored = surv < SURVIVAL_FLOOR
        if floored:
            if s[i] == 0.0:
                n_floor += 1
            surv = SURVIVAL_FLOOR
        if s[i] == 1.0:
            loss -= math.log(dens) * inv_b
        else:
            loss -= math.log(surv) * inv_b
        dd = -(s[i] / dens) * inv_b
        dsv = 0.0 if floored else -((1.0 - s[i]) / surv) * inv_b
        dq = -dsv
        dot = 0.0
        for j in range(kk):
            dp = dd * memb[j] / length[j] + dq * seg[j] / length[j]
            dprobs[j] = dp
            dot += dp * probs[j]
        for j in range(kk):
            dlog[j] = probs[j] * (dprobs[j] - dot)
            db2[j] += dlog[j]
        for a in range(h):
            dh_a = 0.0
            for j in range(kk):
                dw2[j, a] += dlog[j] * hid[a]
                dh_a += dlog[j] * w2[j, a]
            if a1[a] > 0.0:
                db1[a] += dh_a
                for b in range(p):
                    dw1[a, b] += dh_a * x[i, b]
        if want_cut_grads and m > 0:
            for j in range(kk):
                ln = length[j]
                wfj = dd * probs[j]
                wqj = dq * probs[j]
                dmemb_dlo = -(su[j] * (1.0 - su[j])) * sv[j] / tau
                dmemb_dhi = su[j] * (sv[j] * (1.0 - sv[j])) / tau
                d2 = denom[j] * denom[j]
                dseg_dlo = ((sig_lo0[j] - su[j]) * denom[j] + nterm[j] * ecneg[j]) / d2
                dseg_dhi = ((1.0 - sv[j] - sig_hi0[j]) * denom[j] - nterm[j] * ecneg[j]) / d2
                dterm_hi[j] += wfj * (dmemb_dhi / ln - memb[j] / (ln * ln)) + wqj * (
                    dseg_dhi / ln - seg[j] / (ln * ln)
                )
                dterm_lo[j] += wfj * (dmemb_dlo / ln + memb[j] / (ln * ln)) + wqj * (
                    dseg_dlo / ln + seg[j] / (ln * ln)
                )
    dcuts = np.zeros(m)
    for k in range(m):
        dcuts[k] = dterm_hi[k] + dterm_lo[k + 1]
    return loss, dw1, db1, dw2, db2, dcuts, n_floor


@njit(cache=True)
def concordance_counts(surv_through, z, events):
    n = z.shape[0]
    num = 0.0
    den = 0
    for i in range(n):
        if events[i] != 1:
            continue
        zi = z[i]
        si = surv_through[i, zi]
        for j in range(n):
            if z[j] > zi:
                den += 1
                sj = surv_through[j, zi]
                if si < sj:
                    num += 1.0
                elif si == sj:
                    num += 0.5
    return num, den
