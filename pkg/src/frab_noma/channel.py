"""User geometry and channel vector generation.

Two fading models are supported: i.i.d. Rayleigh entries with distance-based
power scaling, and a single-path mmWave line-of-sight model built from a
uniform-linear-array steering vector.

Path-loss convention: the Rayleigh model scales per-entry *power* by
1/(1 + d**alpha), i.e. amplitude by (1 + d**alpha)**-0.5.  The mmWave model
divides the complex amplitude by (1 + d**alpha).  The asymmetry is
deliberate; the analytical track (see ``analysis``) is only consistent with
power scaling for Rayleigh, while the mmWave model is used for qualitative
comparisons only.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidConfigError

RAYLEIGH = "rayleigh"
MMWAVE = "mmwave"


class UserGroup(Enum):
    S1 = "s1"  # QoS users, fixed distance on a circle
    S2 = "s2"  # opportunistic users, uniform over the disk


@dataclass(frozen=True)
class UserGeometry:
    group: UserGroup
    distance: float


@dataclass
class ChannelRealization:
    """Per-trial channel vectors and geometry for both user groups."""

    s1_channels: np.ndarray  # (s1_size, m_antennas) complex
    s2_channels: np.ndarray  # (s2_size, m_antennas) complex
    geometries: list
    model: str


def sample_s2_distance(r1, rng, size=None):
    """Distance of a user dropped uniformly over a disk of radius r1.

    d = r1 * sqrt(u) with u uniform on [0, 1), so that area elements are
    equally likely.
    """
    if r1 <= 0:
        raise InvalidConfigError(f"disk radius must be positive, got {r1}")
    return r1 * np.sqrt(rng.random(size))


def gen_rayleigh(m_antennas, distance, pathloss_exp, rng, size=None):
    """Rayleigh channel vector(s) with per-entry power 1/(1 + d**alpha).

    Returns shape (m_antennas,) or (size, m_antennas).  Real and imaginary
    parts are independent N(0, 1/(2*(1+d**alpha))).
    """
    _check_m(m_antennas)
    shape = (m_antennas,) if size is None else (size, m_antennas)
    sigma = np.sqrt(0.5 / (1.0 + distance ** pathloss_exp))
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return sigma * (re + 1j * im)


def gen_mmwave(m_antennas, distance, pathloss_exp, rng, size=None):
    """Single-path mmWave LOS vector(s): a/(1+d**alpha) * steering(theta).

    The complex amplitude a is standard circularly-symmetric Gaussian and
    the normalized direction theta is uniform on [-1, 1].  Entry m has
    phase -pi*m*theta relative to entry 0.
    """
    _check_m(m_antennas)
    n = 1 if size is None else size
    a = np.sqrt(0.5) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    theta = rng.uniform(-1.0, 1.0, n)
    m_idx = np.arange(m_antennas)
    steer = np.exp(-1j * np.pi * np.outer(theta, m_idx))
    vec = (a / (1.0 + distance ** pathloss_exp))[:, None] * steer
    return vec[0] if size is None else vec


def steering_vector(m_antennas, theta):
    """Unit-amplitude ULA response [1, e^{-j pi theta}, ...]."""
    return np.exp(-1j * np.pi * theta * np.arange(m_antennas))


def sample_realization(m_antennas, s1_size, s2_size, model, r1, ry, pathloss_exp, rng):
    """Draw one full trial: S1 users pinned at radius ry, S2 users on the disk."""
    _check_m(m_antennas)
    if s1_size < 1 or s2_size < 1:
        raise InvalidConfigError("both user groups must be non-empty")
    if model not in (RAYLEIGH, MMWAVE):
        raise InvalidConfigError(f"unknown channel model {model!r}")

    gen = gen_rayleigh if model == RAYLEIGH else gen_mmwave
    geometries = []

    s1 = np.empty((s1_size, m_antennas), dtype=np.complex128)
    for k in range(s1_size):
        s1[k] = gen(m_antennas, ry, pathloss_exp, rng)
        geometries.append(UserGeometry(UserGroup.S1, ry))

    s2 = np.empty((s2_size, m_antennas), dtype=np.complex128)
    for i in range(s2_size):
        d = float(sample_s2_distance(r1, rng))
        s2[i] = gen(m_antennas, d, pathloss_exp, rng)
        geometries.append(UserGeometry(UserGroup.S2, d))

    return ChannelRealization(s1, s2, geometries, model)


def _check_m(m_antennas):
    if m_antennas < 1:
        raise InvalidConfigError(f"antenna count must be >= 1, got {m_antennas}")
