"""Channel model moments, geometry bounds and structural invariants."""

import numpy as np
import pytest

from frab_noma import channel
from frab_noma.errors import InvalidConfigError
from frab_noma.rng import stream_for_trial


class _StubRng:
    """Feeds predetermined draws to make the doc examples deterministic."""

    def __init__(self, uniforms=(), normals=()):
        self._u = list(uniforms)
        self._n = list(normals)

    def random(self, size=None):
        v = self._u.pop(0)
        return v if size is None else np.full(size, v)

    def standard_normal(self, shape=None):
        v = self._n.pop(0)
        return v if shape is None else np.full(shape, v)

    def uniform(self, lo, hi, size=None):
        v = self._u.pop(0)
        return np.full(size, lo + (hi - lo) * v)


def test_disk_distance_edges():
    assert channel.sample_s2_distance(40.0, _StubRng(uniforms=[0.0])) == 0.0
    assert channel.sample_s2_distance(40.0, _StubRng(uniforms=[1.0])) == 40.0


def test_disk_distance_area_law():
    rng = stream_for_trial(2001, 0, 0)
    d = channel.sample_s2_distance(40.0, rng, size=10**6)
    assert d.min() >= 0.0 and d.max() <= 40.0
    frac = np.count_nonzero(d <= 20.0) / d.size
    assert abs(frac - 0.25) < 0.002


def test_disk_distance_bad_radius():
    with pytest.raises(InvalidConfigError):
        channel.sample_s2_distance(0.0, _StubRng(uniforms=[0.5]))


@pytest.mark.parametrize("d,alpha,target", [(0.0, 3.0, 1.0), (1.0, 1.0, 0.5)])
def test_rayleigh_per_entry_power(d, alpha, target):
    rng = stream_for_trial(2002, 0, 0)
    h = channel.gen_rayleigh(2, d, alpha, rng, size=500_000)
    power = np.mean(np.abs(h) ** 2)
    assert abs(power - target) < 0.01 * target


def test_rayleigh_shape_and_errors():
    rng = stream_for_trial(2003, 0, 0)
    assert channel.gen_rayleigh(4, 10.0, 3.0, rng).shape == (4,)
    assert channel.gen_rayleigh(4, 10.0, 3.0, rng, size=7).shape == (7, 4)
    with pytest.raises(InvalidConfigError):
        channel.gen_rayleigh(0, 10.0, 3.0, rng)


def test_mmwave_examples():
    # a = 1 (normals sqrt(2), 0 scaled by sqrt(1/2)), theta = 0 -> all ones
    rng = _StubRng(uniforms=[0.5], normals=[np.sqrt(2.0), 0.0])
    h = channel.gen_mmwave(4, 0.0, 3.0, rng)
    assert np.allclose(h, np.ones(4), atol=1e-12)
    # theta = 1, M = 2 -> [1, -1]
    rng = _StubRng(uniforms=[1.0], normals=[np.sqrt(2.0), 0.0])
    h = channel.gen_mmwave(2, 0.0, 3.0, rng)
    assert np.allclose(h, [1.0, -1.0], atol=1e-12)


def test_mmwave_structure():
    rng = stream_for_trial(2004, 0, 0)
    h = channel.gen_mmwave(8, 25.0, 3.0, rng)
    mods = np.abs(h)
    assert np.allclose(mods, mods[0], rtol=1e-12)  # shared modulus |a|/(1+d^a)
    ratios = h[1:] / h[:-1]
    assert np.allclose(np.abs(ratios), 1.0, rtol=1e-12)
    phases = np.angle(ratios)
    assert np.allclose(phases, phases[0], atol=1e-9)  # constant step -pi*theta


def test_mmwave_amplitude_pathloss():
    rng = stream_for_trial(2005, 0, 0)
    h = channel.gen_mmwave(2, 3.0, 1.0, rng, size=200_000)
    # amplitude divided by (1+d^alpha)=4 -> per-entry power E|a|^2/16 = 1/16
    assert abs(np.mean(np.abs(h) ** 2) - 1.0 / 16.0) < 0.01 / 16.0


def test_sample_realization_geometry():
    rng = stream_for_trial(2006, 0, 0)
    real = channel.sample_realization(4, 2, 5, channel.RAYLEIGH, 40.0, 20.0, 3.0, rng)
    assert real.s1_channels.shape == (2, 4)
    assert real.s2_channels.shape == (5, 4)
    s1_geo = [g for g in real.geometries if g.group is channel.UserGroup.S1]
    s2_geo = [g for g in real.geometries if g.group is channel.UserGroup.S2]
    assert all(g.distance == 20.0 for g in s1_geo)
    assert all(0.0 <= g.distance <= 40.0 for g in s2_geo)
    with pytest.raises(InvalidConfigError):
        channel.sample_realization(4, 0, 5, channel.RAYLEIGH, 40.0, 20.0, 3.0, rng)
