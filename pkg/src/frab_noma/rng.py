"""Counter-based random streams for reproducible parallel Monte Carlo.

Every trial owns the stream keyed by ``(seed, sweep_index, trial_index)``;
the 256-bit Philox counter is laid out as ``[draw_block, trial, sweep, 0]``
so streams never overlap and results cannot depend on how trials are
scheduled across workers.

The module also exposes a vectorised Philox4x64-10 implementation that
reproduces ``numpy.random.Philox`` raw output bit for bit.  The simulation
kernels need that: numpy's ``Generator`` cannot evaluate a batch of
counters in one shot, and the numba kernels cannot call it at all.
"""

import numpy as np

_MASK64 = (1 << 64) - 1

# Philox4x64 round multipliers and Weyl key increments (Random123 constants).
PHILOX_M0 = np.uint64(0xD2E7470EE14C6C93)
PHILOX_M1 = np.uint64(0xCA5A826395121157)
PHILOX_W0 = np.uint64(0x9E3779B97F4A7C15)
PHILOX_W1 = np.uint64(0xBB67AE8584CAA73B)

_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_SHIFT11 = np.uint64(11)
_ONE64 = np.uint64(1)

# Uniform doubles are built as ((raw >> 11) + 1) * 2**-53, which lands in
# (0, 1] so log(u) in the Box-Muller transform is always finite.
TWO_NEG53 = 2.0 ** -53


def stream_for_trial(seed, sweep_index, trial_index):
    """Independent, reproducible generator for one Monte Carlo trial.

    The same triple always yields the same stream, and distinct triples
    yield non-overlapping Philox counter ranges (a trial would have to
    consume 2**66 doubles to collide with its neighbour).
    """
    if sweep_index < 0 or trial_index < 0:
        raise ValueError("sweep_index and trial_index must be non-negative")
    counter = (int(sweep_index) << 128) | (int(trial_index) << 64)
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64, counter=counter))


def _mulhilo(a, b):
    """Full 64x64 -> 128 bit product of uint64 arrays, as (hi, lo)."""
    lo = a * b
    a_lo = a & _MASK32
    a_hi = a >> _SHIFT32
    b_lo = b & _MASK32
    b_hi = b >> _SHIFT32
    t = a_lo * b_hi + ((a_lo * b_lo) >> _SHIFT32)
    hi = a_hi * b_hi + (t >> _SHIFT32) + ((a_hi * b_lo + (t & _MASK32)) >> _SHIFT32)
    return hi, lo


def philox4x64(c0, c1, c2, c3, key0, key1):
    """Ten-round Philox4x64 block function over broadcastable uint64 inputs.

    Matches numpy's Philox bit generator evaluated at the same counter
    (numpy pre-increments its counter, callers account for the +1).
    """
    c0 = np.asarray(c0, dtype=np.uint64)
    c1 = np.asarray(c1, dtype=np.uint64)
    c2 = np.asarray(c2, dtype=np.uint64)
    c3 = np.asarray(c3, dtype=np.uint64)
    k0 = np.uint64(key0)
    k1 = np.uint64(key1)
    # uint64 wraparound is the point here, silence scalar overflow warnings
    with np.errstate(over="ignore"):
        for _ in range(10):
            hi0, lo0 = _mulhilo(PHILOX_M0, c0)
            hi1, lo1 = _mulhilo(PHILOX_M1, c2)
            c0 = hi1 ^ c1 ^ k0
            c1 = lo1
            c2 = hi0 ^ c3 ^ k1
            c3 = lo0
            k0 = k0 + PHILOX_W0
            k1 = k1 + PHILOX_W1
    return c0, c1, c2, c3


def raw_blocks(seed, sweep_index, trial_indices, n_blocks):
    """Raw 64-bit outputs for a batch of trial streams.

    Returns a ``(len(trial_indices), 4 * n_blocks)`` uint64 array; row ``t``
    is exactly what ``stream_for_trial(seed, sweep_index, t)`` would emit.
    """
    trials = np.asarray(trial_indices, dtype=np.uint64)
    out = np.empty((trials.shape[0], 4 * n_blocks), dtype=np.uint64)
    c2 = np.uint64(int(sweep_index) & _MASK64)
    zero = np.uint64(0)
    k0 = np.uint64(int(seed) & _MASK64)
    for j in range(n_blocks):
        # numpy's Philox increments before generating: block j sits at c0 = j+1.
        o0, o1, o2, o3 = philox4x64(np.uint64(j + 1), trials, c2, zero, k0, 0)
        out[:, 4 * j + 0] = o0
        out[:, 4 * j + 1] = o1
        out[:, 4 * j + 2] = o2
        out[:, 4 * j + 3] = o3
    return out


def uniform_tape(seed, sweep_index, trial_indices, n_uniforms):
    """Per-trial tape of uniforms in (0, 1], shape (n_trials, n_uniforms).

    This is the randomness contract shared by both simulation backends:
    the numba kernels regenerate the identical values trial by trial.
    """
    n_blocks = -(-n_uniforms // 4)
    raw = raw_blocks(seed, sweep_index, trial_indices, n_blocks)
    u = ((raw >> _SHIFT11) + _ONE64).astype(np.float64) * TWO_NEG53
    return u[:, :n_uniforms]
