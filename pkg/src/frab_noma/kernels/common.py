"""Shared contract between the numba and numpy simulation backends.

Both backends consume the identical per-trial uniform tape (see ``rng``)
with this layout, in uniforms:

  Rayleigh: [2*s1_size*M | s2_size | 2*s2_size*M]
            entry m of user k maps to the Box-Muller pair at tape offset
            2*(k*M + m); the middle segment holds the disk draws.
  mmWave:   [3*s1_size   | s2_size | 3*s2_size]
            per user: two uniforms for the complex amplitude, one for the
            normalized direction theta = 2u - 1.

All scalar parameters that feed floating-point arithmetic are computed
once here so the two backends cannot diverge by construction.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..channel import RAYLEIGH
from ..frab import Codebook

MODEL_RAYLEIGH = 0
MODEL_MMWAVE = 1


@dataclass(frozen=True)
class KernelParams:
    """Sweep-point-independent inputs of ``simulate_block``."""

    m: int
    s1_size: int
    s2_size: int
    nq: int
    model_id: int
    s1_scale: float  # Rayleigh: per-part std at ry; mmWave: 1/(1+ry**alpha)
    r1: float
    pathloss_exp: float
    a0sq: float
    a1sq: float
    eps0: float
    eps1: float
    eps_sum: float
    cw_re: np.ndarray
    cw_im: np.ndarray
    tape_len: int


def tape_len(m, s1_size, s2_size, model_id):
    if model_id == MODEL_RAYLEIGH:
        return 2 * s1_size * m + s2_size + 2 * s2_size * m
    return 3 * s1_size + s2_size + 3 * s2_size


def build_params(config):
    """Pack a validated SystemConfig into the kernel parameter block."""
    model_id = MODEL_RAYLEIGH if config.model == RAYLEIGH else MODEL_MMWAVE
    pl_ry = 1.0 + config.ry ** config.pathloss_exp
    if model_id == MODEL_RAYLEIGH:
        s1_scale = math.sqrt(0.5 / pl_ry)
    else:
        s1_scale = 1.0 / pl_ry
    cw = Codebook.build(config.nq).codewords
    cw_re = np.ascontiguousarray(cw.real)
    cw_im = np.ascontiguousarray(cw.imag)
    rates = config.rates
    return KernelParams(
        m=config.m_antennas,
        s1_size=config.s1_size,
        s2_size=config.s2_size,
        nq=config.nq,
        model_id=model_id,
        s1_scale=s1_scale,
        r1=float(config.r1),
        pathloss_exp=float(config.pathloss_exp),
        a0sq=float(config.a0sq),
        a1sq=float(config.a1sq),
        eps0=rates.eps0,
        eps1=rates.eps1,
        eps_sum=rates.eps_sum,
        cw_re=cw_re,
        cw_im=cw_im,
        tape_len=tape_len(config.m_antennas, config.s1_size, config.s2_size, model_id),
    )
