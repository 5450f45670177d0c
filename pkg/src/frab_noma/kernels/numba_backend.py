"""Numba simulation backend: per-trial Philox streams inside a prange loop.

Every trial regenerates its own uniforms from the counter-based stream, so
results are independent of thread count and block partitioning by
construction.  Floating-point expressions mirror ``numpy_backend`` term for
term.
"""

import math

import numpy as np
from numba import njit, prange

from .common import MODEL_RAYLEIGH

NAME = "numba"

_TWO_PI = 2.0 * math.pi
_TWO_NEG53 = 2.0 ** -53

_U11 = np.uint64(11)
_U32 = np.uint64(32)
_MASK32 = np.uint64(0xFFFFFFFF)
_PHILOX_M0 = np.uint64(0xD2E7470EE14C6C93)
_PHILOX_M1 = np.uint64(0xCA5A826395121157)
_PHILOX_W0 = np.uint64(0x9E3779B97F4A7C15)
_PHILOX_W1 = np.uint64(0xBB67AE8584CAA73B)


def block_size(params):
    # flags are the only per-trial output; keep calls coarse
    return 1 << 21


@njit(inline="always")
def _mulhilo(a, b):
    lo = a * b
    a_lo = a & _MASK32
    a_hi = a >> _U32
    b_lo = b & _MASK32
    b_hi = b >> _U32
    t = a_lo * b_hi + ((a_lo * b_lo) >> _U32)
    hi = a_hi * b_hi + (t >> _U32) + ((a_hi * b_lo + (t & _MASK32)) >> _U32)
    return hi, lo


@njit(inline="always")
def _philox4x64(c0, c1, c2, c3, k0, k1):
    for _ in range(10):
        hi0, lo0 = _mulhilo(_PHILOX_M0, c0)
        hi1, lo1 = _mulhilo(_PHILOX_M1, c2)
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + _PHILOX_W0
        k1 = k1 + _PHILOX_W1
    return c0, c1, c2, c3


@njit(inline="always")
def _fill_uniforms(u, n_blocks, trial, sweep, seed):
    # block j of the trial stream sits at counter (j+1, trial, sweep, 0)
    for j in range(n_blocks):
        o0, o1, o2, o3 = _philox4x64(
            np.uint64(j + 1), trial, sweep, np.uint64(0), seed, np.uint64(0)
        )
        u[4 * j + 0] = (float((o0 >> _U11) + np.uint64(1))) * _TWO_NEG53
        u[4 * j + 1] = (float((o1 >> _U11) + np.uint64(1))) * _TWO_NEG53
        u[4 * j + 2] = (float((o2 >> _U11) + np.uint64(1))) * _TWO_NEG53
        u[4 * j + 3] = (float((o3 >> _U11) + np.uint64(1))) * _TWO_NEG53


@njit(inline="always")
def _channel_rows(u, base, n_users, m, model_id, out_re, out_im):
    """Unscaled channel planes for one group, reading the tape at ``base``.

    Returns the tape offset just past the segment.
    """
    if model_id == MODEL_RAYLEIGH:
        for k in range(n_users):
            for j in range(m):
                pidx = base + 2 * (k * m + j)
                r = math.sqrt(-2.0 * math.log(u[pidx]))
                out_re[k, j] = r * math.cos(_TWO_PI * u[pidx + 1])
                out_im[k, j] = r * math.sin(_TWO_PI * u[pidx + 1])
        return base + 2 * n_users * m
    sq = math.sqrt(0.5)
    for k in range(n_users):
        r = math.sqrt(-2.0 * math.log(u[base + 3 * k]))
        a_re = r * math.cos(_TWO_PI * u[base + 3 * k + 1]) * sq
        a_im = r * math.sin(_TWO_PI * u[base + 3 * k + 1]) * sq
        theta = 2.0 * u[base + 3 * k + 2] - 1.0
        for j in range(m):
            phi = math.pi * j * theta
            cphi = math.cos(phi)
            sphi = math.sin(phi)
            out_re[k, j] = a_re * cphi + a_im * sphi
            out_im[k, j] = a_im * cphi - a_re * sphi
    return base + 3 * n_users


@njit(inline="always")
def _gain(a_re, a_im, u_idx, b_re, b_im, v_idx, m):
    acc_re = 0.0
    acc_im = 0.0
    for j in range(m):
        ar = a_re[u_idx, j]
        ai = a_im[u_idx, j]
        br = b_re[v_idx, j]
        bi = b_im[v_idx, j]
        acc_re += ar * br + ai * bi
        acc_im += ar * bi - ai * br
    return acc_re * acc_re + acc_im * acc_im


@njit(cache=True, parallel=True)
def _simulate(seed, sweep, trial_start, n_trials, m, k1, k2, nq, model_id,
              s1_scale, r1, alpha, a0sq, a1sq, eps0, eps1, eps_sum, noise,
              cw_re, cw_im, n_tape,
              out_s1, out_s2, out_oma, out_perf):
    n_blocks = (n_tape + 3) // 4
    for t in prange(n_trials):
        trial = np.uint64(trial_start + t)
        u = np.empty(4 * n_blocks)
        _fill_uniforms(u, n_blocks, trial, sweep, seed)

        h_re = np.empty((k1, m))
        h_im = np.empty((k1, m))
        off = _channel_rows(u, 0, k1, m, model_id, h_re, h_im)
        for k in range(k1):
            for j in range(m):
                h_re[k, j] = s1_scale * h_re[k, j]
                h_im[k, j] = s1_scale * h_im[k, j]

        g_re = np.empty((k2, m))
        g_im = np.empty((k2, m))
        doff = off
        off = _channel_rows(u, doff + k2, k2, m, model_id, g_re, g_im)
        for i in range(k2):
            d = r1 * math.sqrt(u[doff + i])
            pl = 1.0 + d ** alpha
            if model_id == MODEL_RAYLEIGH:
                scale = math.sqrt(0.5 / pl)
            else:
                scale = 1.0 / pl
            for j in range(m):
                g_re[i, j] = scale * g_re[i, j]
                g_im[i, j] = scale * g_im[i, j]

        # quantize S1 channels and build the perfect-phase baseline
        f_re = np.empty((k1, m))
        f_im = np.empty((k1, m))
        fp_re = np.empty((k1, m))
        fp_im = np.empty((k1, m))
        for k in range(k1):
            for j in range(m):
                best_i = 0
                best_s = -np.inf
                for i in range(nq):
                    s = cw_re[i] * h_re[k, j] + cw_im[i] * h_im[k, j]
                    if s > best_s:
                        best_s = s
                        best_i = i
                f_re[k, j] = cw_re[best_i]
                f_im[k, j] = cw_im[best_i]
                ab = math.sqrt(h_re[k, j] * h_re[k, j] + h_im[k, j] * h_im[k, j])
                if ab == 0.0:
                    fp_re[k, j] = 1.0
                    fp_im[k, j] = 0.0
                else:
                    fp_re[k, j] = h_re[k, j] / ab
                    fp_im[k, j] = h_im[k, j] / ab

        g1 = np.empty((k1, k1))
        g1p = np.empty((k1, k1))
        for k in range(k1):
            for l in range(k1):
                g1[k, l] = _gain(h_re, h_im, k, f_re, f_im, l, m)
                g1p[k, l] = _gain(h_re, h_im, k, fp_re, fp_im, l, m)
        g2 = np.empty((k2, k1))
        for i in range(k2):
            for l in range(k1):
                g2[i, l] = _gain(g_re, g_im, i, f_re, f_im, l, m)

        for k in range(k1):
            i1 = 0.0
            i1p = 0.0
            for l in range(k1):
                if l != k:
                    i1 += g1[k, l]
                    i1p += g1p[k, l]
            own = g1[k, k]
            ownp = g1p[k, k]
            out_s1[t, k] = 1 if own * a0sq / (own * a1sq + i1 + noise) < eps0 else 0
            out_oma[t, k] = 1 if own / (i1 + noise) < eps_sum else 0
            out_perf[t, k] = 1 if ownp * a0sq / (ownp * a1sq + i1p + noise) < eps0 else 0

            best_i = 0
            best_v = -1.0
            best_int = 0.0
            for i in range(k2):
                i2 = 0.0
                for l in range(k1):
                    if l != k:
                        i2 += g2[i, l]
                v = g2[i, k] * a0sq / (g2[i, k] * a1sq + i2 + noise)
                if v > best_v:
                    best_v = v
                    best_i = i
                    best_int = i2
            post = g2[best_i, k] * a1sq / (best_int + noise)
            out_s2[t, k] = 1 if (best_v < eps0) or (post < eps1) else 0


def simulate_block(seed, sweep_index, trial_start, n_trials, params, noise):
    """Same contract as ``numpy_backend.simulate_block``."""
    p = params
    out_s1 = np.empty((n_trials, p.s1_size), dtype=np.uint8)
    out_s2 = np.empty((n_trials, p.s1_size), dtype=np.uint8)
    out_oma = np.empty((n_trials, p.s1_size), dtype=np.uint8)
    out_perf = np.empty((n_trials, p.s1_size), dtype=np.uint8)
    _simulate(
        np.uint64(seed), np.uint64(sweep_index), int(trial_start), int(n_trials),
        p.m, p.s1_size, p.s2_size, p.nq, p.model_id,
        p.s1_scale, p.r1, p.pathloss_exp, p.a0sq, p.a1sq,
        p.eps0, p.eps1, p.eps_sum, float(noise),
        p.cw_re, p.cw_im, p.tape_len,
        out_s1, out_s2, out_oma, out_perf,
    )
    return out_s1, out_s2, out_oma, out_perf
