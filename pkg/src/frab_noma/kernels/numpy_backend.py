"""Pure-numpy simulation backend.

Vectorises over trials but keeps every per-element floating-point
operation in the same order as the numba kernels, so both backends
produce the same outage flags for the same (seed, sweep, trial) triple.
"""

import math

import numpy as np

from .. import rng
from .common import MODEL_RAYLEIGH

NAME = "numpy"

_TWO_PI = 2.0 * math.pi


def block_size(params):
    """Trials per chunk, sized to keep the working set around ~256 MB."""
    per_trial = 8.0 * (
        params.tape_len
        + 6.0 * (params.s1_size + params.s2_size) * params.m
        + 4.0 * params.s2_size * params.s1_size
    )
    return int(max(64, min(1 << 20, 2.56e8 / per_trial)))


def _boxmuller(u1, u2):
    r = np.sqrt(-2.0 * np.log(u1))
    return r * np.cos(_TWO_PI * u2), r * np.sin(_TWO_PI * u2)


def _channels(tape, offset, n_users, p):
    """Channel planes (T, n_users, M) from the tape segment at ``offset``."""
    t = tape.shape[0]
    m = p.m
    if p.model_id == MODEL_RAYLEIGH:
        seg = tape[:, offset:offset + 2 * n_users * m]
        re, im = _boxmuller(seg[:, 0::2], seg[:, 1::2])
        return re.reshape(t, n_users, m), im.reshape(t, n_users, m), offset + 2 * n_users * m
    seg = tape[:, offset:offset + 3 * n_users]
    a_re, a_im = _boxmuller(seg[:, 0::3], seg[:, 1::3])
    theta = 2.0 * seg[:, 2::3] - 1.0
    phi = np.pi * np.arange(m) * theta[:, :, None]
    cphi = np.cos(phi)
    sphi = np.sin(phi)
    sq = math.sqrt(0.5)
    c_re = (a_re * sq)[:, :, None]
    c_im = (a_im * sq)[:, :, None]
    h_re = c_re * cphi + c_im * sphi
    h_im = c_im * cphi - c_re * sphi
    return h_re, h_im, offset + 3 * n_users


def _cross_gains(a_re, a_im, b_re, b_im):
    """|a_u^H b_v|^2 for all user/beam pairs, accumulated antenna by antenna."""
    t, nu, m = a_re.shape
    nv = b_re.shape[1]
    acc_re = np.zeros((t, nu, nv))
    acc_im = np.zeros((t, nu, nv))
    for j in range(m):
        ar = a_re[:, :, j][:, :, None]
        ai = a_im[:, :, j][:, :, None]
        br = b_re[:, :, j][:, None, :]
        bi = b_im[:, :, j][:, None, :]
        acc_re += ar * br + ai * bi
        acc_im += ar * bi - ai * br
    return acc_re * acc_re + acc_im * acc_im


def _quantize(h_re, h_im, p):
    best_score = np.full(h_re.shape, -np.inf)
    best_idx = np.zeros(h_re.shape, dtype=np.int64)
    for i in range(p.nq):
        score = p.cw_re[i] * h_re + p.cw_im[i] * h_im
        upd = score > best_score
        best_score[upd] = score[upd]
        best_idx[upd] = i
    return p.cw_re[best_idx], p.cw_im[best_idx]


def _interference(gains, k):
    """Sum over beams l != k, accumulated in beam order like the numba loop."""
    t, _, n_beams = gains.shape
    acc = np.zeros((t, gains.shape[1]))
    for l in range(n_beams):
        if l != k:
            acc += gains[:, :, l]
    return acc


def simulate_block(seed, sweep_index, trial_start, n_trials, params, noise):
    """Outage flags for trials [trial_start, trial_start + n_trials).

    Returns four uint8 arrays of shape (n_trials, s1_size): S1 outage,
    S2 outage, OMA outage, and S1 outage under perfect analog beamforming.
    """
    p = params
    trials = np.arange(trial_start, trial_start + n_trials, dtype=np.uint64)
    tape = rng.uniform_tape(seed, sweep_index, trials, p.tape_len)

    h_re, h_im, off = _channels(tape, 0, p.s1_size, p)
    h_re = p.s1_scale * h_re
    h_im = p.s1_scale * h_im

    d = p.r1 * np.sqrt(tape[:, off:off + p.s2_size])
    off += p.s2_size
    g_re, g_im, _ = _channels(tape, off, p.s2_size, p)
    pl = 1.0 + d ** p.pathloss_exp
    if p.model_id == MODEL_RAYLEIGH:
        scale = np.sqrt(0.5 / pl)[:, :, None]
    else:
        scale = (1.0 / pl)[:, :, None]
    g_re = scale * g_re
    g_im = scale * g_im

    f_re, f_im = _quantize(h_re, h_im, p)
    habs = np.sqrt(h_re * h_re + h_im * h_im)
    zero = habs == 0.0
    safe = np.where(zero, 1.0, habs)
    fp_re = np.where(zero, 1.0, h_re / safe)
    fp_im = np.where(zero, 0.0, h_im / safe)

    g1 = _cross_gains(h_re, h_im, f_re, f_im)
    g1p = _cross_gains(h_re, h_im, fp_re, fp_im)
    g2 = _cross_gains(g_re, g_im, f_re, f_im)

    k1 = p.s1_size
    out_s1 = np.empty((n_trials, k1), dtype=np.uint8)
    out_s2 = np.empty((n_trials, k1), dtype=np.uint8)
    out_oma = np.empty((n_trials, k1), dtype=np.uint8)
    out_perf = np.empty((n_trials, k1), dtype=np.uint8)
    rows = np.arange(n_trials)

    for k in range(k1):
        i1 = _interference(g1, k)[:, k]
        i1p = _interference(g1p, k)[:, k]
        own = g1[:, k, k]
        ownp = g1p[:, k, k]
        out_s1[:, k] = own * p.a0sq / (own * p.a1sq + i1 + noise) < p.eps0
        out_oma[:, k] = own / (i1 + noise) < p.eps_sum
        out_perf[:, k] = ownp * p.a0sq / (ownp * p.a1sq + i1p + noise) < p.eps0

        i2 = _interference(g2, k)
        own2 = g2[:, :, k]
        v = own2 * p.a0sq / (own2 * p.a1sq + i2 + noise)
        best = np.argmax(v, axis=1)
        sic = v[rows, best]
        post = own2[rows, best] * p.a1sq / (i2[rows, best] + noise)
        out_s2[:, k] = (sic < p.eps0) | (post < p.eps1)

    return out_s1, out_s2, out_oma, out_perf
