"""Deterministic Monte Carlo runner over transmit-power sweeps.

``run_sweep`` is a pure function of (config, seed): every trial draws from
its own counter-based stream, and all aggregation happens on integer
sufficient statistics, so the output is bit-identical regardless of worker
count, block partitioning, or backend chunking.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import analysis, kernels
from .channel import MMWAVE, RAYLEIGH
from .errors import InvalidConfigError
from .noma import PowerAllocation, RatePair
from .rng import stream_for_trial  # noqa: F401  (re-exported: engine owns the stream contract)

Z95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class SystemConfig:
    """All scenario parameters for one experiment."""

    m_antennas: int
    nq: int
    s1_size: int
    s2_size: int
    r1: float
    ry: float
    pathloss_exp: float
    model: str
    a0sq: float
    a1sq: float
    rate_s1: float
    rate_s2: float
    tx_dbm: tuple
    noise_dbm: float
    num_trials: int
    seed: int
    gc_nodes: int = 20
    include_analytical: bool = False
    include_perfect: bool = False

    @property
    def pa(self):
        return PowerAllocation(self.a0sq, self.a1sq)

    @property
    def rates(self):
        return RatePair(self.rate_s1, self.rate_s2)

    def rho_values(self):
        """Linear transmit-power-to-noise ratios for the dBm sweep."""
        return np.array([10.0 ** ((tx - self.noise_dbm) / 10.0) for tx in self.tx_dbm])

    def validate(self):
        """Raise InvalidConfigError naming the first violated invariant."""
        if self.m_antennas < 1:
            raise InvalidConfigError("m_antennas must be >= 1")
        if self.nq < 2:
            raise InvalidConfigError("nq must be >= 2")
        if self.s1_size < 1 or self.s2_size < 1:
            raise InvalidConfigError("both user groups must be non-empty")
        if self.r1 <= 0:
            raise InvalidConfigError("r1 must be positive")
        if self.ry <= 0:
            raise InvalidConfigError("ry must be positive")
        if self.pathloss_exp <= 0:
            raise InvalidConfigError("pathloss_exp must be positive")
        if self.model not in (RAYLEIGH, MMWAVE):
            raise InvalidConfigError(f"unknown channel model {self.model!r}")
        self.pa  # raises on bad power split
        self.rates  # raises on bad rates
        if len(self.tx_dbm) == 0:
            raise InvalidConfigError("tx_dbm sweep must be non-empty")
        if any(b <= a for a, b in zip(self.tx_dbm, self.tx_dbm[1:])):
            raise InvalidConfigError("tx_dbm sweep must be strictly increasing")
        if self.num_trials < 1:
            raise InvalidConfigError("num_trials must be >= 1")
        if self.gc_nodes < 1:
            raise InvalidConfigError("gc_nodes must be >= 1")
        if self.include_analytical and (
            self.s1_size != 1 or self.nq != 2 or self.model != RAYLEIGH
        ):
            raise InvalidConfigError(
                "analytical curves cover only s1_size=1, nq=2, Rayleigh"
            )

    def to_dict(self):
        d = asdict(self)
        d["tx_dbm"] = list(self.tx_dbm)
        return d

    def sha256(self):
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass
class SeriesData:
    mean: np.ndarray
    ci95_half: np.ndarray
    provenance: str  # "simulated" | "analytical"
    n_trials: int


@dataclass
class OutageCurve:
    """Sweep result: x axes plus named series with 95% half-widths."""

    tx_dbm: np.ndarray
    rho: np.ndarray
    series: dict
    metadata: dict = field(default_factory=dict)


def _wilson_half(events, n):
    if n == 0:
        return 0.0
    p = events / n
    z2 = Z95 * Z95
    return Z95 * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n)


def _outage_stats(total, total_sq, t, k1):
    """Pooled outage frequency and 95% half-width from per-trial counts.

    Uses the per-trial sample variance (beams within a trial are
    correlated); falls back to a Wilson interval when fewer than 10 outage
    events were seen.
    """
    n = t * k1
    mean = total / n
    if total < 10:
        return mean, _wilson_half(total, n)
    if t < 2:
        return mean, 0.0
    var = (total_sq - total * total / t) / (t - 1)
    return mean, Z95 * math.sqrt(var / t) / k1


class _PointStats:
    """Integer sufficient statistics for one sweep point."""

    __slots__ = ("t", "s1", "s2", "oma", "perf", "s1_sq", "s2_sq", "oma_sq",
                 "perf_sq", "s1_s2")

    def __init__(self):
        self.t = 0
        self.s1 = self.s2 = self.oma = self.perf = 0
        self.s1_sq = self.s2_sq = self.oma_sq = self.perf_sq = 0
        self.s1_s2 = 0

    def add(self, f_s1, f_s2, f_oma, f_perf):
        x1 = f_s1.sum(axis=1, dtype=np.int64)
        x2 = f_s2.sum(axis=1, dtype=np.int64)
        xo = f_oma.sum(axis=1, dtype=np.int64)
        xp = f_perf.sum(axis=1, dtype=np.int64)
        self.t += f_s1.shape[0]
        self.s1 += int(x1.sum())
        self.s2 += int(x2.sum())
        self.oma += int(xo.sum())
        self.perf += int(xp.sum())
        self.s1_sq += int((x1 * x1).sum())
        self.s2_sq += int((x2 * x2).sum())
        self.oma_sq += int((xo * xo).sum())
        self.perf_sq += int((xp * xp).sum())
        self.s1_s2 += int((x1 * x2).sum())


def _rate_stats(stats, k1, r0, r1):
    """Mean NOMA outage sum rate and CI from the integer aggregates."""
    t = stats.t
    m1 = stats.s1 / t
    m2 = stats.s2 / t
    mean = r0 * (k1 - m1) + r1 * (k1 - m2)
    if t < 2:
        return mean, 0.0
    v1 = (stats.s1_sq - stats.s1 * stats.s1 / t) / (t - 1)
    v2 = (stats.s2_sq - stats.s2 * stats.s2 / t) / (t - 1)
    c12 = (stats.s1_s2 - stats.s1 * stats.s2 / t) / (t - 1)
    var = r0 * r0 * v1 + r1 * r1 * v2 + 2.0 * r0 * r1 * c12
    return mean, Z95 * math.sqrt(max(var, 0.0) / t)


def _oma_rate_stats(stats, k1, rsum):
    t = stats.t
    mean = rsum * (k1 - stats.oma / t)
    if t < 2:
        return mean, 0.0
    var = (stats.oma_sq - stats.oma * stats.oma / t) / (t - 1)
    return mean, Z95 * rsum * math.sqrt(max(var, 0.0) / t)


def run_sweep(config, workers=1, backend=None):
    """Monte Carlo outage curves over the configured transmit-power sweep.

    ``workers`` sets the numba thread count (the numpy backend is
    single-threaded); it never changes the result.
    """
    config.validate()
    if workers < 1:
        raise InvalidConfigError("workers must be >= 1")
    backend_mod = kernels.resolve_backend(backend)
    if backend_mod.NAME == "numba":
        import numba
        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))

    params = kernels.build_params(config)
    block = backend_mod.block_size(params)
    rho = config.rho_values()
    k1 = config.s1_size
    r0, r1_rate = config.rate_s1, config.rate_s2
    n_points = len(config.tx_dbm)

    per_point = []
    for sweep_index in range(n_points):
        noise = config.m_antennas / rho[sweep_index]
        stats = _PointStats()
        start = 0
        while start < config.num_trials:
            n = min(block, config.num_trials - start)
            flags = backend_mod.simulate_block(
                config.seed, sweep_index, start, n, params, noise
            )
            stats.add(*flags)
            start += n
        per_point.append(stats)

    def collect(attr, attr_sq):
        means = np.empty(n_points)
        cis = np.empty(n_points)
        for i, st in enumerate(per_point):
            means[i], cis[i] = _outage_stats(getattr(st, attr), getattr(st, attr_sq),
                                             st.t, k1)
        return means, cis

    series = {}
    m_s1, c_s1 = collect("s1", "s1_sq")
    m_s2, c_s2 = collect("s2", "s2_sq")
    series["outage_s1"] = SeriesData(m_s1, c_s1, "simulated", config.num_trials)
    series["outage_s2"] = SeriesData(m_s2, c_s2, "simulated", config.num_trials)

    nr = np.empty(n_points)
    nc = np.empty(n_points)
    orate = np.empty(n_points)
    oc = np.empty(n_points)
    for i, st in enumerate(per_point):
        nr[i], nc[i] = _rate_stats(st, k1, r0, r1_rate)
        orate[i], oc[i] = _oma_rate_stats(st, k1, r0 + r1_rate)
    series["noma_sum_rate"] = SeriesData(nr, nc, "simulated", config.num_trials)
    series["oma_sum_rate"] = SeriesData(orate, oc, "simulated", config.num_trials)

    if config.include_perfect:
        m_p, c_p = collect("perf", "perf_sq")
        series["outage_s1_perfect"] = SeriesData(m_p, c_p, "simulated", config.num_trials)

    if config.include_analytical:
        pa, rates = config.pa, config.rates
        a_s1 = np.array([
            analysis.s1_outage_analytical(r, pa, rates, config.m_antennas,
                                          config.ry, config.pathloss_exp)
            for r in rho
        ])
        a_s2 = np.array([
            analysis.s2_outage_analytical(r, pa, rates, config.m_antennas,
                                          config.pathloss_exp, config.r1,
                                          config.s2_size, config.gc_nodes)
            for r in rho
        ])
        zeros = np.zeros(n_points)
        series["outage_s1_analytical"] = SeriesData(a_s1, zeros, "analytical", 0)
        series["outage_s2_analytical"] = SeriesData(a_s2, zeros.copy(), "analytical", 0)

    metadata = {
        "config": config.to_dict(),
        "config_sha256": config.sha256(),
        "seed": config.seed,
        "num_trials": config.num_trials,
        "backend": backend_mod.NAME,
    }
    return OutageCurve(np.asarray(config.tx_dbm, dtype=float), rho, series, metadata)
