import numpy as np
import pytest

from fdsecrecy import dof
from fdsecrecy.channel import CsiPerturbation, Geometry, draw_channels, perturb_csi
from fdsecrecy.dof import AntennaConfig
from fdsecrecy.precoding import (
    Candidate,
    Candidates,
    alignment_residuals,
    build_precoders,
    enumerate_candidates,
    hd_baseline,
    reduce,
    select_pairs,
)

GEO = Geometry.standard(10.0)
P = 1e-3
SEC5 = AntennaConfig(4, 7, 2, 6, 1)


def draw(cfg=SEC5, seed=0, geo=GEO, rho_e=1.0):
    return draw_channels(cfg, geo, 1.0, rho_e, 1e-9, P, seed)


def test_reduce_dims_and_null_residual():
    for seed in range(10):
        cs = draw(seed=seed)
        rc = reduce(cs)
        assert rc.h_ba_bar.shape == (4, 4) and rc.g_ea_bar.shape == (4, 4)
        assert rc.helper == dof.HelperConfig(4, 2, 4, 4)
        assert np.linalg.norm(cs.h_be.conj().T @ rc.u_b0.basis) < 1e-10 * np.linalg.norm(cs.h_be)


def test_reduce_without_eve_jamming_is_identity():
    cs = draw(AntennaConfig(4, 7, 2, 5, 0))
    rc = reduce(cs)
    assert np.array_equal(rc.u_b0.basis, np.eye(5)) and np.array_equal(rc.u_e0.basis, np.eye(5))
    assert np.array_equal(rc.h_ba_bar, cs.h_ba) and np.array_equal(rc.g_eb_bar, cs.g_eb)


@pytest.mark.parametrize("n_b_t, counts", [(2, (0, 0, 2)), (4, (0, 2, 2))])
def test_candidate_counts_on_draws(n_b_t, counts):
    for seed in range(20):
        cands = enumerate_candidates(reduce(draw(SEC5.with_bob_split(n_b_t), seed)))
        assert cands.counts == counts


def test_c3_alignment_unscaled():
    for seed in range(20):
        rc = reduce(draw(seed=seed))
        cands = enumerate_candidates(rc)
        scale = np.linalg.norm(rc.g_ea_bar, 2) + np.linalg.norm(rc.g_eb_bar, 2)
        for c in cands.c3:
            assert np.linalg.norm(rc.g_ea_bar @ c.v_a + rc.g_eb_bar @ c.v_b) <= 1e-9 * scale


def _fake(cls, n, n_s=5, n_h=2):
    return [Candidate(cls, np.eye(n_s)[:, i], np.ones(n_h) * (cls != "C1")) for i in range(n)]


@pytest.mark.parametrize("counts, n_d, n_s, k, classes", [
    ((0, 0, 2), 4, 4, 2, ("C3", "C3")),
    ((0, 2, 2), 2, 4, 2, ("C2", "C2")),
    ((3, 0, 0), 2, 5, 2, ("C1", "C1")),
    ((1, 1, 2), 5, 5, 3, ("C1", "C2", "C3")),
    ((0, 0, 0), 4, 4, 0, ()),
])
def test_select_pairs_budget(counts, n_d, n_s, k, classes):
    cands = Candidates(_fake("C1", counts[0]), _fake("C2", counts[1]), _fake("C3", counts[2]), 5, 2)
    pp = select_pairs(cands, n_d, n_s)
    assert pp.k == k and pp.stream_classes == classes
    assert pp.v_b.shape[1] == sum(c != "C1" for c in classes)


def test_headline_precoders():
    for seed in range(20):
        cs = draw(seed=seed)
        pp = build_precoders(cs)
        assert pp.k == 2 and pp.stream_classes == ("C3", "C3") and pp.generic
        assert np.trace(pp.q_a).real == pytest.approx(P, rel=1e-9)
        assert np.trace(pp.q_b).real == pytest.approx(P, rel=1e-9)
        s = np.linalg.svd(reduce(cs).h_ba_bar @ pp.v_a, compute_uv=False)
        assert s[-1] > 1e-8 * s[0]
        assert alignment_residuals(reduce(cs), pp).max() <= 1e-9


def test_c2_pairs_silent_at_bob():
    for seed in range(20):
        cs = draw(SEC5.with_bob_split(4), seed)
        rc = reduce(cs)
        pp = build_precoders(cs)
        assert pp.stream_classes == ("C2", "C2")
        for i in range(pp.k):
            vb = pp.v_b[:, pp.jam_of[i]]
            assert np.linalg.norm(rc.h_bb_bar @ vb) <= 1e-9 * np.linalg.norm(rc.h_bb_bar, 2) * np.linalg.norm(vb)
        assert alignment_residuals(rc, pp).max() <= 1e-9


def test_stream_count_matches_closed_form_on_random_configs():
    rng = np.random.default_rng(11)
    hits = total = 0
    while total < 1000:
        n_a, n_b = (int(x) for x in rng.integers(1, 9, size=2))
        n_e_t, n_e_r = (int(x) for x in rng.integers(0, 7, size=2))
        n_b_t = int(rng.integers(1, n_b + 1))
        cfg = AntennaConfig(n_a, n_b, n_b_t, n_e_t + n_e_r, n_e_t)
        if not n_e_t < min(cfg.n_b_r, n_e_r):
            continue
        total += 1
        cs = draw(cfg, seed=(11, total))
        hits += build_precoders(cs).k == dof.helper_g(cfg.helper())
    assert hits >= 990


def test_large_config_subspace_count():
    # independent check of sdof_active(10, 18, n_b_t=5, 3, 17) = 1 by building the subspaces
    cfg = AntennaConfig(10, 18, 5, 20, 3)
    for seed in range(3):
        assert build_precoders(draw(cfg, seed)).k == 1 == dof.sdof_active(cfg)


def test_precoder_ignores_bob_side_errors_when_c3_only():
    cs = draw(seed=3)
    base = build_precoders(cs)
    for a in (0.25, 0.5, 1.0):
        pert = build_precoders(perturb_csi(cs, CsiPerturbation(a, "H", 99)))
        assert np.array_equal(pert.v_a, base.v_a) and np.array_equal(pert.v_b, base.v_b)


def test_c2_precoder_depends_on_bob_loop():
    cs = draw(SEC5.with_bob_split(4), 3)
    base = build_precoders(cs)
    pert = build_precoders(perturb_csi(cs, CsiPerturbation(0.5, "H", 99)))
    assert not np.allclose(pert.v_b, base.v_b)


def test_no_jamming_branch_single_stream():
    cfg = AntennaConfig(1, 4, 0, 3, 0)
    cs = draw(cfg, 0, Geometry.standard(10.0, eve_pos=(0.0, -200.0)))
    pp = build_precoders(cs)
    assert pp.k == 1 and pp.v_b.shape == (0, 0)
    assert abs(pp.v_a[0, 0]) ** 2 == pytest.approx(P, rel=1e-12)


def test_no_jamming_branch_respects_dof_cap():
    cfg = AntennaConfig(4, 7, 0, 6, 1)
    pp = build_precoders(draw(cfg, 2, Geometry.standard(10.0, eve_pos=(0.0, -200.0))))
    assert pp.k <= max(dof.sdof_active(cfg), 1)


def test_hd_baseline_pencil():
    cs = draw(seed=4).resplit(0)
    pp = hd_baseline(cs, 2)
    assert pp.k == 2 and pp.stream_classes == ("HD", "HD")
    assert np.trace(pp.q_a).real == pytest.approx(P, rel=1e-9)
    m_b = cs.sigma2 * np.eye(7) + P * cs.h_be @ cs.h_be.conj().T
    m_e = cs.sigma2 * np.eye(5) + P * cs.g_ee @ cs.g_ee.conj().T
    a = cs.h_ba.conj().T @ np.linalg.solve(m_b, cs.h_ba)
    b = cs.g_ea.conj().T @ np.linalg.solve(m_e, cs.g_ea)
    for i in range(2):
        v = pp.v_a[:, i]
        lam = (v.conj() @ a @ v).real / (v.conj() @ b @ v).real
        assert np.linalg.norm(a @ v - lam * b @ v) <= 1e-8 * (np.linalg.norm(a, 2) + lam * np.linalg.norm(b, 2)) * np.linalg.norm(v)


def test_hd_baseline_scalar():
    cfg = AntennaConfig(1, 3, 0, 2, 0)
    pp = hd_baseline(draw(cfg, 1, rho_e=0.0), 1)
    assert pp.v_a.shape == (1, 1)
    assert abs(pp.v_a[0, 0]) ** 2 == pytest.approx(P)


def test_hd_baseline_rejects_zero_streams():
    with pytest.raises(ValueError):
        hd_baseline(draw(), 0)
