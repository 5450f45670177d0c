"""Finite-resolution analog beamforming: codebook, quantizer, channel gains.

A beamformer entry may only take one of ``nq`` equally spaced unit-modulus
phases.  Quantization picks, per antenna, the codeword closest to the phase
of the channel entry; with two phases this degenerates to the sign of the
real part.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, InvalidInputError


@dataclass(frozen=True)
class Codebook:
    """The nq supported phase shifts e^{j*2*pi*i/nq}, i = 0..nq-1."""

    nq: int
    codewords: np.ndarray

    @classmethod
    def build(cls, nq):
        if nq < 2:
            raise InvalidConfigError(f"codebook needs at least 2 phases, got {nq}")
        phases = 2.0 * np.pi * np.arange(nq) / nq
        cw = np.cos(phases) + 1j * np.sin(phases)
        # snap quarter-turn codewords (1, j, -1, -j) to their exact values
        quarter = np.array([1.0, 1.0j, -1.0, -1.0j])
        for i in range(nq):
            if (4 * i) % nq == 0:
                cw[i] = quarter[(4 * i) // nq % 4]
        return cls(nq, cw)


@dataclass(frozen=True)
class Beamformer:
    """Quantized unit-modulus beamforming vector plus the chosen indices."""

    coefficients: np.ndarray
    codeword_indices: np.ndarray


def quantize(h, codebook):
    """Nearest-codeword beamformer for channel vector h.

    For each entry the codeword minimising |cw - h_m/|h_m||^2 is chosen,
    which equals maximising Re(conj(cw) * h_m); the dot-product form avoids
    the division and is exactly scale invariant.  Ties (including h_m = 0)
    resolve to the lowest codeword index.
    """
    h = np.asarray(h, dtype=np.complex128)
    # score[i, m] = Re(conj(cw_i) * h_m); argmax over i takes the first max
    score = np.real(np.conj(codebook.codewords)[:, None] * h[None, :])
    idx = np.argmax(score, axis=0)
    return Beamformer(codebook.codewords[idx], idx)


def effective_gain(h, f):
    """|h^H f|^2 for a channel vector and a beamformer."""
    coeff = f.coefficients if isinstance(f, Beamformer) else np.asarray(f)
    h = np.asarray(h)
    if h.shape != coeff.shape:
        raise InvalidInputError(
            f"dimension mismatch: channel {h.shape} vs beamformer {coeff.shape}"
        )
    return float(np.abs(np.vdot(h, coeff)) ** 2)


def perfect_gain(h):
    """Gain (sum |h_m|)^2 of the ideal unit-modulus beamformer h_m/|h_m|."""
    return float(np.sum(np.abs(h)) ** 2)
