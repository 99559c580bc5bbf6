import math

import numpy as np
import pytest
from scipy import stats

from fdsecrecy.channel import (
    CsiPerturbation,
    Geometry,
    dbm_to_watts,
    draw_channels,
    perturb_csi,
    watts_to_dbm,
)
from fdsecrecy.dof import AntennaConfig

SEC5 = AntennaConfig(4, 7, 2, 6, 1)


def draw(seed=0, cfg=SEC5, geo=None, **kw):
    geo = geo or Geometry.standard(10.0)
    return draw_channels(cfg, geo, kw.get("rho_b", 1.0), kw.get("rho_e", 1.0), 1e-9, 1e-3, seed)


def test_dbm_conversions():
    assert dbm_to_watts(0) == pytest.approx(1e-3)
    assert dbm_to_watts(-60) == pytest.approx(1e-9)
    assert dbm_to_watts(30) == 1.0
    for x in (-60.0, -3.3, 0.0, 27.0):
        assert watts_to_dbm(dbm_to_watts(x)) == pytest.approx(x, abs=1e-12)


def test_dimensions():
    cs = draw()
    n_b_r, n_e_r = 5, 5
    assert cs.h_ba.shape == (n_b_r, 4)
    assert cs.h_bb.shape == (n_b_r, 2)
    assert cs.h_be.shape == (n_b_r, 1)
    assert cs.g_ea.shape == (n_e_r, 4)
    assert cs.g_eb.shape == (n_e_r, 2)
    assert cs.g_ee.shape == (n_e_r, 1)


def test_no_eve_jamming_shapes():
    cs = draw(cfg=AntennaConfig(2, 3, 0, 2, 0))
    assert cs.h_be.shape == (3, 0) and cs.g_ee.shape == (2, 0) and cs.h_bb.shape == (3, 0)


def test_path_loss_magnitudes():
    cs = draw()
    assert np.allclose(np.abs(cs.h_ba), 20.0 ** -1.75, rtol=1e-12)
    assert np.allclose(np.abs(cs.g_ea), math.hypot(10, 10) ** -1.75, rtol=1e-12)
    assert np.allclose(np.abs(cs.h_bb), 1.0) and np.allclose(np.abs(cs.g_ee), 1.0)


def test_unit_geometry_has_unit_gains():
    geo = Geometry.unit()
    for a, b in (("alice", "bob"), ("alice", "eve"), ("bob", "eve")):
        assert geo.amplitude(a, b) == pytest.approx(1.0)


def test_colocated_nodes_rejected():
    geo = Geometry.standard(10.0, eve_pos=(-10.0, 0.0))
    with pytest.raises(ValueError):
        draw(geo=geo)


def test_odd_exponent_warns():
    with pytest.warns(UserWarning):
        Geometry.standard(1.0, path_loss_exp=5.0)


def test_determinism_and_seed_keys():
    a, b = draw((3, 17)), draw((3, 17))
    for link in a.norm:
        assert np.array_equal(a.norm[link], b.norm[link])
    c = draw((3, 18))
    assert not np.array_equal(a.norm["ba"], c.norm["ba"])


def test_bob_split_only_slices():
    full = draw(5)
    other = draw(5, cfg=SEC5.with_bob_split(4))
    assert np.array_equal(full.norm["bb"], other.norm["bb"])
    assert np.array_equal(full.resplit(4).h_ba, other.h_ba)


def test_phases_uniform():
    cfg = AntennaConfig(10, 11, 1, 2, 1)
    theta = np.concatenate([np.angle(draw(s, cfg=cfg).norm["ba"]).ravel() for s in range(100)])
    theta = np.mod(theta, 2 * np.pi)
    assert theta.size >= 10_000
    assert stats.kstest(theta, "uniform", args=(0, 2 * np.pi)).pvalue > 0.01


def test_distinct_seeds_uncorrelated():
    x = np.array([draw(s).norm["ea"][0, 0] for s in range(1000)])
    y = np.array([draw(s + 10_000).norm["ea"][0, 0] for s in range(1000)])
    assert abs(np.corrcoef(x, y)[0, 1]) < 0.05


def test_alpha_zero_identity():
    cs = draw(1)
    assert perturb_csi(cs, CsiPerturbation(0.0, "H", 9)) is cs


def test_alpha_one_forgets_truth():
    cs1, cs2 = draw(1), draw(2)
    p1 = perturb_csi(cs1, CsiPerturbation(1.0, "G", 9))
    p2 = perturb_csi(cs2, CsiPerturbation(1.0, "G", 9))
    for link in ("ea", "eb", "ee"):
        assert np.array_equal(p1.norm[link], p2.norm[link])
    assert np.array_equal(p1.norm["ba"], cs1.norm["ba"])


def test_perturbation_targets_one_family():
    cs = draw(1)
    p = perturb_csi(cs, CsiPerturbation(0.3, "H", 4))
    for link in ("ba", "bb", "be"):
        assert not np.array_equal(p.norm[link], cs.norm[link])
    for link in ("ea", "eb", "ee"):
        assert p.norm[link] is cs.norm[link]


def test_alpha_half_moments():
    cfg = AntennaConfig(10, 10, 0, 10, 0)
    cs = draw(0, cfg=cfg)
    g = cs.norm["ea"]
    samples = np.stack([perturb_csi(cs, CsiPerturbation(0.5, "G", s)).norm["ea"] for s in range(1000)])
    assert samples.size == 100_000
    second = np.mean(np.abs(samples) ** 2)
    assert second == pytest.approx(0.75 * np.mean(np.abs(g) ** 2) + 0.25, rel=0.02)
    # the mean keeps the sqrt(1 - a^2) shrink of the true channel
    assert np.allclose(samples.mean(axis=0), math.sqrt(0.75) * g, atol=0.1)


def test_invalid_perturbation():
    with pytest.raises(ValueError):
        CsiPerturbation(1.5, "H")
    with pytest.raises(ValueError):
        CsiPerturbation(0.5, "X")


def test_rho_range():
    with pytest.raises(ValueError):
        draw(rho_b=1.5)
