"""Closed-form outage expressions, their oracles, and supporting numerics.

The analytical track covers the single-beam, two-phase-codebook, Rayleigh
regime: gain thresholds, the small-argument CDF approximation for the
quantized effective gain, the Gauss-Chebyshev composite CDF for the
opportunistic users, and high-SNR diversity-slope fits.

The small-argument formulas are asymptotic: they exceed 1 for moderate
arguments, so the outage-probability entry points clamp to [0, 1] (set
``clamp=False`` to see the raw value).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidInputError

SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# special functions (half-integer orders are all the closed forms need)
# ---------------------------------------------------------------------------

def gamma_half_integer(x):
    """Gamma(x) for positive multiples of 1/2, by recurrence from sqrt(pi)."""
    twice = round(2.0 * x)
    if abs(2.0 * x - twice) > 1e-12 or twice < 1:
        raise InvalidInputError(f"gamma_half_integer needs a positive half-integer, got {x}")
    if twice % 2 == 0:
        return float(math.factorial(twice // 2 - 1))
    val = SQRT_PI
    k = 0.5
    while k + 1.0 <= x + 1e-12:
        val *= k
        k += 1.0
    return val


def beta_function(a, b):
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) at half-integer orders."""
    return gamma_half_integer(a) * gamma_half_integer(b) / gamma_half_integer(a + b)


def erf(x):
    """Error function, accurate to ~1e-14, vectorised.

    Uses the positive-term series erf(x) = 2x e^{-x^2}/sqrt(pi) *
    sum (2x^2)^n / (2n+1)!!  for |x| <= 6; beyond that erf is 1 to less
    than 1e-16.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x1 = np.atleast_1d(x)
    ax = np.abs(x1)
    small = ax <= 6.0
    xs = np.where(small, x1, 0.0)
    t2 = 2.0 * xs * xs
    term = np.ones_like(xs)
    total = np.ones_like(xs)
    for n in range(1, 240):
        term = term * t2 / (2 * n + 1)
        total += term
        if np.all(term <= 1e-18 * total):
            break
    out = np.where(
        small,
        (2.0 / SQRT_PI) * xs * np.exp(-xs * xs) * total,
        np.sign(x1),
    )
    return float(out[()]) if scalar else out.reshape(x.shape)


def lower_incomplete_gamma_half(x):
    """gamma(1/2, x) = sqrt(pi) * erf(sqrt(x))."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InvalidInputError("lower incomplete gamma needs x >= 0")
    return SQRT_PI * erf(np.sqrt(x))


def adaptive_simpson(f, a, b, tol=1e-9, max_depth=60):
    """Adaptive Simpson integration of a scalar function over [a, b]."""
    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fm = f(mid)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fb, fm, whole, tol, max_depth)


def _simpson_rec(f, a, b, fa, fb, fm, whole, tol, depth):
    mid = 0.5 * (a + b)
    lm = 0.5 * (a + mid)
    rm = 0.5 * (mid + b)
    flm, frm = f(lm), f(rm)
    left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return (
        _simpson_rec(f, a, mid, fa, fm, flm, left, tol / 2.0, depth - 1)
        + _simpson_rec(f, mid, b, fm, fb, frm, right, tol / 2.0, depth - 1)
    )


# ---------------------------------------------------------------------------
# outage thresholds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Threshold:
    """Linear gain thresholds for the two decode stages.

    ``feasible`` is False when the power split cannot support the target
    rates at any gain (outage probability is then one); the phi values are
    set to inf in that case.
    """

    phi0: float
    phi1: float
    feasible: bool


def thresholds(pa, rates, m_antennas, rho):
    """Gain levels below which each decode stage fails, phi_i = (M eps_i/rho)/den_i."""
    if rho <= 0:
        raise InvalidInputError(f"rho must be positive, got {rho}")
    den0 = pa.a0sq - rates.eps0 * pa.a1sq
    den1 = pa.a1sq
    feasible = den0 > 0.0 and den1 > 0.0
    phi0 = (m_antennas * rates.eps0 / rho) / den0 if den0 > 0 else math.inf
    phi1 = (m_antennas * rates.eps1 / rho) / den1 if den1 > 0 else math.inf
    return Threshold(phi0, phi1, feasible)


# ---------------------------------------------------------------------------
# small-argument CDF approximations (S1 user)
# ---------------------------------------------------------------------------

def prop1_cdf(z, m_antennas):
    """Small-z CDF approximation of |sum of m folded normals|^2.

    The folded normals have variance 1/2.  Valid as z -> 0 only; the
    expression grows without bound, so callers must clamp or restrict z.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise InvalidInputError("prop1_cdf needs z >= 0")
    m = int(m_antennas)
    coeff = 2.0 ** m / (math.pi ** (m / 2.0) * math.factorial(m))
    out = coeff * z ** (m / 2.0)
    return float(out[()]) if out.ndim == 0 else out


def lemma1_cdf(y, m_antennas, distance, pathloss_exp):
    """Small-y CDF approximation of the quantized effective gain |h^H f|^2.

    Covers the two-phase codebook with Rayleigh fading at the given
    distance.  Requires m_antennas >= 2: the expression degenerates at
    m = 1, where ``prop1_cdf`` already gives the folded-normal form.
    """
    m = int(m_antennas)
    if m < 2:
        raise InvalidInputError("lemma1_cdf needs m_antennas >= 2")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise InvalidInputError("lemma1_cdf needs y >= 0")
    pl = 1.0 + distance ** pathloss_exp
    coeff = (
        2.0 ** m * beta_function(1.5, m / 2.0)
        / (math.pi ** (m / 2.0) * math.factorial(m - 1) * math.sqrt(m) * SQRT_PI)
    )
    out = coeff * (y * pl) ** ((m + 1) / 2.0)
    return float(out[()]) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# composite CDF of the opportunistic users (S2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussChebyshev:
    """Nodes, weights and per-node exponential rates for the disk average."""

    n_nodes: int
    eta: np.ndarray
    weights: np.ndarray
    rates: np.ndarray  # c_n = 1 + ((r1/2) eta_n + r1/2)**alpha


def gauss_chebyshev_nodes(n_nodes, r1, pathloss_exp):
    if n_nodes < 1:
        raise InvalidInputError("need at least one quadrature node")
    n = np.arange(1, n_nodes + 1)
    eta = np.cos((2.0 * n - 1.0) * math.pi / (2.0 * n_nodes))
    weights = (math.pi / (2.0 * n_nodes)) * np.sqrt(1.0 - eta ** 2) * (eta + 1.0)
    rates = 1.0 + (0.5 * r1 * eta + 0.5 * r1) ** pathloss_exp
    return GaussChebyshev(n_nodes, eta, weights, rates)


def composite_cdf_gc(y, m_antennas, pathloss_exp, r1, n_nodes=20):
    """Gauss-Chebyshev approximation of the composite-gain CDF.

    Averages the conditional CDF 1 - exp(-(1 + d**alpha) y / M) of an
    S2 user's effective gain over the uniform-disk distance distribution.
    The fading part of the gain is exponential with mean M because the
    beamformer has squared norm M.
    """
    gc = gauss_chebyshev_nodes(n_nodes, r1, pathloss_exp)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise InvalidInputError("composite_cdf_gc needs y >= 0")
    out = np.sum(gc.weights * (1.0 - np.exp(-np.multiply.outer(y, gc.rates) / m_antennas)), axis=-1)
    return float(out[()]) if out.ndim == 0 else out


def disk_cdf_quadrature(y, m_antennas, pathloss_exp, r1, tol=1e-9):
    """Direct-integration oracle for ``composite_cdf_gc``.

    Adaptive Simpson on the exact disk average
    int_0^r1 (2t/r1^2) (1 - exp(-(1 + t**alpha) y / M)) dt,
    independent of the Gauss-Chebyshev machinery under test.
    """
    def integrand(t):
        return (2.0 * t / r1 ** 2) * (1.0 - math.exp(-(1.0 + t ** pathloss_exp) * y / m_antennas))

    return adaptive_simpson(integrand, 0.0, r1, tol=tol)


# ---------------------------------------------------------------------------
# outage probabilities and diversity slopes
# ---------------------------------------------------------------------------

def _clamp01(p, clamp):
    return min(max(p, 0.0), 1.0) if clamp else p


def s1_outage_analytical(rho, pa, rates, m_antennas, distance, pathloss_exp, clamp=True):
    """Outage probability of the QoS user: P(gain < phi0), single beam.

    Analysis scope: two-phase codebook, Rayleigh fading.  Infeasible power
    splits return 1.
    """
    th = thresholds(pa, rates, m_antennas, rho)
    if not th.feasible:
        return 1.0
    return _clamp01(float(lemma1_cdf(th.phi0, m_antennas, distance, pathloss_exp)), clamp)


def s2_outage_analytical(rho, pa, rates, m_antennas, pathloss_exp, r1, s2_size,
                         n_nodes=20, clamp=True):
    """Outage probability of the selected S2 user: F(max(phi0, phi1))^|S2|.

    Exact up to the quadrature under the i.i.d. channel assumption, since
    for a single beam the pairing rule picks the largest gain.
    """
    th = thresholds(pa, rates, m_antennas, rho)
    if not th.feasible:
        return 1.0
    y = max(th.phi0, th.phi1)
    p = float(composite_cdf_gc(y, m_antennas, pathloss_exp, r1, n_nodes)) ** s2_size
    return _clamp01(p, clamp)


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares slope of log10(outage) vs log10(rho)."""

    slope: float
    diversity: float
    n_used: int
    n_excluded: int


def fit_diversity_slope(curve, window=None, min_outage=1e-12):
    """Diversity order estimate from the high-SNR tail of an outage curve.

    ``curve`` is a sequence of (rho_linear, outage) pairs.  ``window``
    selects indices (start, stop); by default the top decade of rho is
    used.  Non-positive or sub-``min_outage`` points are dropped with a
    warning; fewer than 3 usable points raises.
    """
    rho = np.asarray([c[0] for c in curve], dtype=float)
    p = np.asarray([c[1] for c in curve], dtype=float)
    if window is None:
        sel = rho >= rho.max() / 10.0
    else:
        sel = np.zeros(len(rho), dtype=bool)
        sel[window[0]:window[1]] = True
    usable = sel & (p >= min_outage) & (p > 0.0)
    n_excluded = int(np.count_nonzero(sel) - np.count_nonzero(usable))
    if n_excluded:
        warnings.warn(f"excluded {n_excluded} window points with outage < {min_outage}")
    if np.count_nonzero(usable) < 3:
        raise InsufficientDataError("need at least 3 usable points for a slope fit")
    slope = float(np.polyfit(np.log10(rho[usable]), np.log10(p[usable]), 1)[0])
    return SlopeFit(slope, -slope, int(np.count_nonzero(usable)), n_excluded)
