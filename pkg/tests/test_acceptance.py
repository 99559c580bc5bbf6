"""Acceptance criteria, one printed PASS/FAIL line each.

Run under pytest (lines appear in the terminal output) or directly:
``python tests/test_acceptance.py``.
"""
import sys
import time

import numpy as np
import pytest

from fdsecrecy import cli, dof
from fdsecrecy.channel import CsiPerturbation, Geometry, draw_channels, perturb_csi
from fdsecrecy.dof import AntennaConfig, HelperConfig
from fdsecrecy.numerics import gen_eig_hermitian, left_null_basis, null_basis, rate_logdet
from fdsecrecy.precoding import alignment_residuals, build_precoders, reduce
from fdsecrecy.simulator import ScenarioSpec, rates, run_scenario, sdof_slope

SEC5 = AntennaConfig(4, 7, 2, 6, 1)
GRID = (10, 12, 12)


def _line(tag, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"


def c1_max_over_split():
    t0 = time.perf_counter()
    checked, bad = dof.kernel.split_max_sweep(*GRID)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60.0
    return ok, f"{checked} configs, {len(bad)} mismatches, {1e3 * dt:.1f} ms ({dof.BACKEND} kernel)"


def _worst_case_grid():
    return dof.kernel.worst_case_sweep(*GRID)


def c2a_worst_case():
    checked, bad, _, _ = _worst_case_grid()
    return not bad, f"{checked} triples, {len(bad)} mismatches between closed form and min over Eve splits"


def c2b_argmin_at_extremes():
    checked, _, cor1, _ = _worst_case_grid()
    return not cor1, f"{checked} triples, {len(cor1)} with Eve's argmin outside {{0, n_e}}"


def c2c_more_bob_than_eve():
    checked, _, _, cor2 = _worst_case_grid()
    shown = ", ".join(f"({a},{b},{e})" for a, b, e, _ in cor2[:4])
    more = " ..." if len(cor2) > 4 else ""
    return not cor2, f"{checked} triples, {len(cor2)} with n_b > n_e but dof 0 [(n_a,n_b,n_e): {shown}{more}]"


def c3_headline():
    res = dof.sdof_active_max(4, 7, 1, 5)
    got = (
        res.dof,
        res.optimizer,
        dof.candidate_counts(HelperConfig(4, 2, 4, 4)),
        dof.candidate_counts(SEC5.with_bob_split(4).helper()),
        dof.sdof_active(SEC5.with_bob_split(4)),
        dof.sdof_active(SEC5.with_bob_split(3)),
    )
    want = (2, 2, (0, 0, 2), (0, 2, 2), 2, 1)
    return got == want, f"(dof, N_b^t*, counts@2, counts@4, dof@4, dof@3) = {got}"


def c4_alignment(n=1000):
    geo = Geometry.standard(10.0)
    worst = 0.0
    hits = 0
    target = dof.helper_g(SEC5.helper())
    for t in range(n):
        cs = draw_channels(SEC5, geo, 1.0, 1.0, 1e-9, 1e-3, (4, t))
        pp = build_precoders(cs)
        worst = max(worst, float(alignment_residuals(reduce(cs), pp).max(initial=0.0)))
        hits += pp.k == target
    ok = worst <= 1e-9 and hits >= 0.99 * n
    return ok, f"max residual {worst:.2e} over {n} draws, k = helper_g on {hits}/{n}"


def c5_slope(trials=200):
    t0 = time.perf_counter()
    geo = Geometry.unit()
    s1 = sdof_slope(AntennaConfig(4, 7, 0, 6, 1), geo, "proposed_fd", 40.0, 80.0, trials, 5)
    wc = dof.worst_case_sdof(2, 10, 3)
    n_e_t = wc.optimizer
    s2 = sdof_slope(AntennaConfig(2, 10, 0, 3, n_e_t), geo, "proposed_fd", 40.0, 80.0, trials, 5)
    dt = time.perf_counter() - t0
    ok = abs(s1 - 2) <= 0.3 and abs(s2 - wc.dof) <= 0.15 * wc.dof and wc.dof == 2 and dt < 120
    return ok, f"slope {s1:.4f} (4,7,1,5); {s2:.4f} (2,10,3) at n_e_t={n_e_t}; target 2 +/- 15%; {dt:.1f}s"


def c6_fig9(trials=200):
    alphas = (0.0, 0.25, 0.5, 1.0)
    cs = draw_channels(SEC5, Geometry.standard(10.0), 1.0, 1.0, 1e-9, 1e-3, (6, 0))
    base = build_precoders(cs)
    same_pp = all(
        np.array_equal(p.v_a, base.v_a) and np.array_equal(p.v_b, base.v_b)
        for p in (build_precoders(perturb_csi(cs, CsiPerturbation(a, "H", (6, 0)))) for a in alphas)
    )
    spec = ScenarioSpec(4, 7, 1, 5, ("alpha_h",), alphas, r=10.0, trials=trials, seed=6,
                        schemes=("proposed_fd", "alt_split(4)"))
    res = run_scenario(spec)
    fd = [r for r in res.lookup("alpha_h", "proposed_fd")]
    same_rows = len({tuple(v for k, v in r.items() if k != "sweep_value") for r in fd}) == 1
    alt = [r["mean_secrecy_rate_bits"] for r in res.lookup("alpha_h", "alt_split(4)")]
    decreasing = all(a > b for a, b in zip(alt, alt[1:]))
    ok = same_pp and same_rows and decreasing
    return ok, (f"2/5 precoder identical: {same_pp}, 2/5 rows identical: {same_rows}, "
                f"4/3 rates {[round(x, 3) for x in alt]}")


def c7_eve_saturation(trials=200):
    geo = Geometry.unit()
    cfg = AntennaConfig(4, 7, 2, 6, 1)
    p_lo, p_hi = 1e4, 1e6
    re = np.zeros((trials, 2))
    for t in range(trials):
        cs = draw_channels(cfg, geo, 1.0, 1.0, 1.0, p_lo, (7, t))
        for j, p in enumerate((p_lo, p_hi)):
            c = cs.with_params(power=p)
            re[t, j] = rates(c, build_precoders(c))[1]
    m = re.mean(axis=0)
    return m[1] - m[0] <= 1.0, f"mean R_e {m[0]:.4f} -> {m[1]:.4f} bits (40 -> 60 dB), rise {m[1] - m[0]:.4f}"


def _crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def c8_numerics(cases=50):
    rng = np.random.default_rng(8)
    null_res = eig_res = rate_err = 0.0
    for _ in range(cases):
        m, n = (int(x) for x in rng.integers(1, 21, size=2))
        r = int(rng.integers(0, min(m, n) + 1))
        a = _crandn(rng, m, r) @ _crandn(rng, r, n)
        sc = max(np.linalg.norm(a, 2), 1.0)
        null_res = max(null_res, np.linalg.norm(a @ null_basis(a).basis) / sc,
                       np.linalg.norm(a.conj().T @ left_null_basis(a).basis) / sc)

        k = int(rng.integers(1, 21))
        x, y = _crandn(rng, k, k), _crandn(rng, k, k)
        ga, gb = x @ x.conj().T, y @ y.conj().T + 0.1 * np.eye(k)
        lam, v = gen_eig_hermitian(ga, gb)
        scale = np.linalg.norm(ga, 2) + np.abs(lam).max() * np.linalg.norm(gb, 2)
        eig_res = max(eig_res, np.linalg.norm(ga @ v - gb @ v * lam) / scale)

        h = _crandn(rng, m, n)
        q = _crandn(rng, n, n)
        q = q @ q.conj().T
        w = _crandn(rng, m, m)
        w = w @ w.conj().T
        mm = np.eye(m) + w
        ref = (np.linalg.slogdet(mm + h @ q @ h.conj().T)[1] - np.linalg.slogdet(mm)[1]) / np.log(2)
        rate_err = max(rate_err, abs(rate_logdet(h, q, w, 1.0) - ref) / max(abs(ref), 1.0))
    ok = null_res < 1e-10 and eig_res < 1e-8 and rate_err < 1e-9
    return ok, f"null {null_res:.1e}, gen-eig {eig_res:.1e}, log-det {rate_err:.1e} over {cases} instances (dim <= 20)"


def c9_determinism(tmp):
    outs = []
    for i, workers in enumerate(("1", "1", "4")):
        out = f"{tmp}/det{i}.csv"
        code = cli.main(["simulate", "fig4", "--trials", "20", "--seed", "9", "--workers", workers, "--out", out])
        assert code == 0
        with open(out, "rb") as fh:
            outs.append(fh.read())
    ok = outs[0] == outs[1] == outs[2]
    return ok, f"two serial runs and a 4-worker run byte-identical: {ok} ({len(outs[0])} bytes)"


CRITERIA = [
    ("1 max over Bob's split", c1_max_over_split),
    ("2a worst case over Eve's split", c2a_worst_case),
    ("2b Eve's argmin at an extreme split", c2b_argmin_at_extremes),
    ("2c n_b > n_e keeps dof >= 1", c2c_more_bob_than_eve),
    ("3 headline configuration", c3_headline),
    ("4 alignment residuals and stream count", c4_alignment),
    ("5 empirical S.D.o.F. slope", c5_slope),
    ("6 CSI-error invariance", c6_fig9),
    ("7 Eve rate saturation", c7_eve_saturation),
    ("8 numerics", c8_numerics),
    ("9 determinism", c9_determinism),
]


@pytest.mark.parametrize("tag, fn", CRITERIA, ids=[t.split()[0] for t, _ in CRITERIA])
def test_criterion(tag, fn, capsys, tmp_path):
    ok, detail = fn(tmp_path) if fn is c9_determinism else fn()
    with capsys.disabled():
        print("\n" + _line(tag, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for tag, fn in CRITERIA:
            ok, detail = fn(tmp) if fn is c9_determinism else fn()
            print(_line(tag, ok, detail), flush=True)
            failed += not ok
    sys.exit(1 if failed else 0)
