"""Power allocation, SINR chain, user pairing and per-trial outage events.

Each beam k serves its QoS (S1) user plus one opportunistically selected
S2 partner.  The S1 user decodes treating the partner's message as noise;
the partner first decodes the S1 message (SIC stage) and, on success,
subtracts it and decodes its own.  The noise term in every SINR is
m_antennas/rho, from the transmit power normalization.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfigError
from .frab import quantize, effective_gain

__all__ = [
    "PowerAllocation",
    "RatePair",
    "TrialOutcome",
    "sinr_s1",
    "sinr_sic",
    "sinr_s2_postsic",
    "select_partner",
    "run_trial",
    "run_trial_oma",
]


@dataclass(frozen=True)
class PowerAllocation:
    """Power split between the S1 message (a0sq) and the S2 message (a1sq).

    a1sq = 0 is the degenerate single-user split used by the OMA baseline
    checks; regular NOMA operation has a0sq >= a1sq > 0.
    """

    a0sq: float
    a1sq: float

    def __post_init__(self):
        if abs(self.a0sq + self.a1sq - 1.0) > 1e-12:
            raise InvalidConfigError("power fractions must sum to one")
        if self.a1sq < 0 or self.a0sq < self.a1sq:
            raise InvalidConfigError("power ordering violated: need a0sq >= a1sq >= 0")


@dataclass(frozen=True)
class RatePair:
    """Target rates in bits per channel use and the derived SINR thresholds."""

    r0: float
    r1: float

    def __post_init__(self):
        if self.r0 <= 0 or self.r1 <= 0:
            raise InvalidConfigError("target rates must be positive")

    @property
    def eps0(self):
        return 2.0 ** self.r0 - 1.0

    @property
    def eps1(self):
        return 2.0 ** self.r1 - 1.0

    @property
    def eps_sum(self):
        """Threshold for the OMA baseline serving one user at rate r0 + r1."""
        return 2.0 ** (self.r0 + self.r1) - 1.0


@dataclass
class TrialOutcome:
    """Per-beam pairing decision, SINR triple and outage flags for one trial."""

    paired_user: np.ndarray  # (s1_size,) int
    sinr_s1: np.ndarray
    sinr_sic: np.ndarray
    sinr_s2: np.ndarray
    outage_s1: np.ndarray  # bool
    outage_s2: np.ndarray  # bool
    beamformers: list = field(default_factory=list)


def _check_rho(rho):
    if rho <= 0:
        raise InvalidConfigError(f"transmit SNR must be positive, got {rho}")


def _interference(gains, k):
    return float(np.sum(gains) - gains[k])


def sinr_s1(gains, k, pa, m_antennas, rho):
    """Eq.-4 style SINR: own beam's gain under the NOMA split, partner as noise."""
    _check_rho(rho)
    g = gains[k]
    return g * pa.a0sq / (g * pa.a1sq + _interference(gains, k) + m_antennas / rho)


def sinr_sic(gains, k, pa, m_antennas, rho):
    """SINR at the S2 partner for decoding the S1 message (SIC stage).

    Same expression as ``sinr_s1`` evaluated with the S2 user's gains.
    """
    return sinr_s1(gains, k, pa, m_antennas, rho)


def sinr_s2_postsic(gains, k, pa, m_antennas, rho):
    """Post-SIC SINR of the S2 partner decoding its own message."""
    _check_rho(rho)
    return gains[k] * pa.a1sq / (_interference(gains, k) + m_antennas / rho)


def select_partner(k, s2_gains, pa, m_antennas, rho):
    """Index of the S2 user maximising the SIC SINR on beam k.

    ``s2_gains`` has shape (s2_size, s1_size): gains of every S2 user
    against every beam.  Ties resolve to the lowest index, and one user may
    be selected by several beams.
    """
    s2_gains = np.asarray(s2_gains)
    if s2_gains.ndim != 2 or s2_gains.shape[0] < 1:
        raise InvalidConfigError("need a (s2_size, s1_size) gain matrix with s2_size >= 1")
    best_i, best_val = 0, -1.0
    for i in range(s2_gains.shape[0]):
        val = sinr_sic(s2_gains[i], k, pa, m_antennas, rho)
        if val > best_val:
            best_i, best_val = i, val
    return best_i


def run_trial(realization, codebook, pa, rates, rho):
    """Full decode chain for one channel realization, all beams.

    Quantizes each S1 user's channel into its beam, pairs every beam with
    the S2 user most likely to complete SIC, and evaluates the three SINRs
    and both outage events per beam.
    """
    _check_rho(rho)
    h = realization.s1_channels
    g = realization.s2_channels
    n_beams = h.shape[0]
    m = h.shape[1]

    beamformers = [quantize(h[k], codebook) for k in range(n_beams)]
    g1 = np.array([[effective_gain(h[k], beamformers[l]) for l in range(n_beams)]
                   for k in range(n_beams)])
    g2 = np.array([[effective_gain(g[i], beamformers[l]) for l in range(n_beams)]
                   for i in range(g.shape[0])])

    paired = np.empty(n_beams, dtype=int)
    s_s1 = np.empty(n_beams)
    s_sic = np.empty(n_beams)
    s_s2 = np.empty(n_beams)
    for k in range(n_beams):
        paired[k] = select_partner(k, g2, pa, m, rho)
        s_s1[k] = sinr_s1(g1[k], k, pa, m, rho)
        s_sic[k] = sinr_sic(g2[paired[k]], k, pa, m, rho)
        s_s2[k] = sinr_s2_postsic(g2[paired[k]], k, pa, m, rho)

    out_s1 = s_s1 < rates.eps0
    out_s2 = (s_sic < rates.eps0) | (s_s2 < rates.eps1)
    return TrialOutcome(paired, s_s1, s_sic, s_s2, out_s1, out_s2, beamformers)


def run_trial_oma(realization, codebook, rates, rho):
    """Outage flags for the baseline without NOMA.

    Each beam serves only its S1 user with full power at target rate
    r0 + r1; the beamformers are the same quantized ones.
    """
    _check_rho(rho)
    h = realization.s1_channels
    n_beams = h.shape[0]
    m = h.shape[1]
    beamformers = [quantize(h[k], codebook) for k in range(n_beams)]
    g1 = np.array([[effective_gain(h[k], beamformers[l]) for l in range(n_beams)]
                   for k in range(n_beams)])
    out = np.empty(n_beams, dtype=bool)
    for k in range(n_beams):
        snr = g1[k, k] / (_interference(g1[k], k) + m / rho)
        out[k] = snr < rates.eps_sum
    return out
