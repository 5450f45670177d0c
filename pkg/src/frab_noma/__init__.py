"""NOMA downlink with finite-resolution analog beamforming.

Simulation engine, closed-form analysis and CLI for outage-rate and
outage-probability experiments.
"""

__version__ = "0.1.0"

from .channel import (  # noqa: F401
    ChannelRealization,
    UserGeometry,
    UserGroup,
    gen_mmwave,
    gen_rayleigh,
    sample_realization,
    sample_s2_distance,
)
from .engine import OutageCurve, SystemConfig, run_sweep, stream_for_trial  # noqa: F401
from .frab import Beamformer, Codebook, effective_gain, perfect_gain, quantize  # noqa: F401
from .noma import (  # noqa: F401
    PowerAllocation,
    RatePair,
    TrialOutcome,
    run_trial,
    run_trial_oma,
    select_partner,
    sinr_s1,
    sinr_s2_postsic,
    sinr_sic,
)
