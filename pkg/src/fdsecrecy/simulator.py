"""Covariance-domain secrecy rates and reproducible Monte-Carlo sweeps.

Trials are keyed by index: trial ``t`` draws its channels from
``(seed, t)`` whatever the sweep point, scheme, or worker that runs it.
Results are gathered per trial and reduced in index order with
``math.fsum``, so serial and parallel runs give identical bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, dof
from .channel import CsiPerturbation, Geometry, dbm_to_watts, draw_channels, perturb_csi
from .numerics import NumericalError, rate_logdet
from .precoding import PrecoderPair, build_precoders, hd_baseline

SWEEP_VARS = ("eve_x", "eve_y", "rho", "rho_b", "rho_e", "alpha_h", "alpha_g", "power_dbm")
CSV_HEADER = (
    "sweep_var",
    "sweep_value",
    "scheme",
    "mean_secrecy_rate_bits",
    "mean_rb_bits",
    "mean_re_bits",
    "k_streams",
    "trials",
)
MAX_FAIL_FRACTION = 0.01
_ALT = re.compile(r"^alt_split\((\d+)\)$")


class SimulationError(RuntimeError):
    """Too many trials failed numerically for the averages to be trusted."""


def rates(cs, pp: PrecoderPair) -> tuple[float, float]:
    """Rates at Bob and Eve in bits for the split carried by ``cs``."""
    p = cs.power
    n_e_t = cs.cfg.n_e_t
    h_ba, h_bb, h_be = cs.h_ba, cs.h_bb, cs.h_be
    g_ea, g_eb, g_ee = cs.g_ea, cs.g_eb, cs.g_ee
    q_a = pp.q_a
    n_b_t = cs.cfg.n_b_t
    if pp.v_b.shape[1] == 0:
        q_b = np.zeros((n_b_t, n_b_t), dtype=complex)
    else:
        if pp.v_b.shape[0] != n_b_t:
            raise ValueError(f"v_b has {pp.v_b.shape[0]} rows but Bob transmits on {n_b_t}")
        q_b = pp.q_b
    w_b = cs.rho_b * h_bb @ q_b @ h_bb.conj().T
    w_e = g_eb @ q_b @ g_eb.conj().T
    if n_e_t > 0:
        w_b = w_b + (p / n_e_t) * h_be @ h_be.conj().T
        w_e = w_e + (cs.rho_e * p / n_e_t) * g_ee @ g_ee.conj().T
    r_b = rate_logdet(h_ba, q_a, w_b, cs.sigma2)
    r_e = rate_logdet(g_ea, q_a, w_e, cs.sigma2)
    return r_b, r_e


def secrecy_rate(cs, pp: PrecoderPair) -> float:
    r_b, r_e = rates(cs, pp)
    return max(r_b - r_e, 0.0)


def scheme_split(scheme: str, cfg: dof.AntennaConfig) -> int:
    """Bob's transmit-antenna count under ``scheme``."""
    if scheme == "proposed_fd":
        return dof.sdof_active_max(cfg.n_a, cfg.n_b, cfg.n_e_t, cfg.n_e_r).optimizer
    if scheme == "hd_baseline":
        return 0
    m = _ALT.match(scheme)
    if m:
        n = int(m.group(1))
        if n > cfg.n_b:
            raise ValueError(f"{scheme}: Bob has only {cfg.n_b} antennas")
        return n
    raise ValueError(f"unknown scheme {scheme!r}")


def _evaluate(cs_true, cs_est, schemes) -> dict:
    """Rates of every scheme on one realization; precoders see ``cs_est``."""
    out = {}
    fd_k = None
    for scheme in schemes:
        if scheme == "hd_baseline":
            continue
        split = scheme_split(scheme, cs_true.cfg)
        pp = build_precoders(cs_est.resplit(split))
        r_b, r_e = rates(cs_true.resplit(split), pp)
        out[scheme] = (r_b, r_e, pp.k)
        if scheme == "proposed_fd":
            fd_k = pp.k
    if "hd_baseline" in schemes:
        if fd_k is None:
            split = scheme_split("proposed_fd", cs_true.cfg)
            fd_k = build_precoders(cs_est.resplit(split)).k
        if fd_k == 0:
            out["hd_baseline"] = (0.0, 0.0, 0)
        else:
            pp = hd_baseline(cs_est.resplit(0), fd_k)
            r_b, r_e = rates(cs_true.resplit(0), pp)
            out["hd_baseline"] = (r_b, r_e, pp.k)
    return out


def sdof_slope(cfg: dof.AntennaConfig, geo: Geometry, scheme: str, p_low_db: float, p_high_db: float,
               trials: int, seed: int, rho_b: float = 1.0, rho_e: float = 1.0) -> float:
    """Empirical high-SNR slope of the secrecy rate in bits per doubling of power.

    Noise is fixed at 1 and ``p_*_db`` give P/sigma^2; each trial keeps its
    channels across the two power points.
    """
    if p_high_db <= p_low_db + 10.0:
        raise ValueError("need p_high_db > p_low_db + 10")
    p_lo = 10.0 ** (p_low_db / 10.0)
    p_hi = 10.0 ** (p_high_db / 10.0)
    span = math.log2(p_hi) - math.log2(p_lo)
    slopes = []
    for t in range(trials):
        cs = draw_channels(cfg, geo, rho_b, rho_e, 1.0, p_lo, (seed, t))
        r_lo = _evaluate(cs, cs, (scheme,))[scheme]
        cs_hi = cs.with_params(power=p_hi)
        r_hi = _evaluate(cs_hi, cs_hi, (scheme,))[scheme]
        s_lo = max(r_lo[0] - r_lo[1], 0.0)
        s_hi = max(r_hi[0] - r_hi[1], 0.0)
        slopes.append((s_hi - s_lo) / span)
    return math.fsum(slopes) / trials


@dataclass(frozen=True)
class ScenarioSpec:
    n_a: int
    n_b: int
    n_e_t: int
    n_e_r: int
    sweep_var: tuple
    sweep_values: tuple
    r: float = 10.0
    path_loss_exp: float = 3.5
    eve_x: float = 0.0
    eve_y: float | None = None
    power_dbm: float = 0.0
    noise_dbm: float = -60.0
    rho_b: float = 1.0
    rho_e: float = 1.0
    alpha_h: float = 0.0
    alpha_g: float = 0.0
    trials: int = 1000
    seed: int = 0
    schemes: tuple = ("proposed_fd", "hd_baseline")

    def __post_init__(self):
        if isinstance(self.sweep_var, str):
            object.__setattr__(self, "sweep_var", (self.sweep_var,))
        object.__setattr__(self, "sweep_var", tuple(self.sweep_var))
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.sweep_var:
            raise ValueError("sweep_var must name at least one variable")
        for v in self.sweep_var:
            if v not in SWEEP_VARS:
                raise ValueError(f"unknown sweep variable {v!r}; choose from {', '.join(SWEEP_VARS)}")
        if not self.sweep_values or not all(math.isfinite(v) for v in self.sweep_values):
            raise ValueError("sweep_values must be a nonempty list of finite numbers")
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        cfg = self.antennas()
        for s in self.schemes:
            scheme_split(s, cfg)

    def antennas(self) -> dof.AntennaConfig:
        return dof.AntennaConfig(self.n_a, self.n_b, 0, self.n_e_t + self.n_e_r, self.n_e_t)

    def points(self) -> list:
        return [(var, val) for var in self.sweep_var for val in self.sweep_values]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sweep_var"] = list(self.sweep_var)
        d["sweep_values"] = list(self.sweep_values)
        d["schemes"] = list(self.schemes)
        return d

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _point_params(spec: ScenarioSpec, var: str, val: float) -> dict:
    prm = {
        "eve": (spec.eve_x, -spec.r if spec.eve_y is None else spec.eve_y),
        "rho_b": spec.rho_b,
        "rho_e": spec.rho_e,
        "alpha_h": spec.alpha_h,
        "alpha_g": spec.alpha_g,
        "power_dbm": spec.power_dbm,
    }
    if var == "eve_x":
        prm["eve"] = (val, prm["eve"][1])
    elif var == "eve_y":
        prm["eve"] = (prm["eve"][0], val)
    elif var == "rho":
        prm["rho_b"] = prm["rho_e"] = val
    else:
        prm[var] = val
    return prm


def _run_trial(spec: ScenarioSpec, t: int):
    """Rates for every (point, scheme) of trial ``t``; failed cells are None."""
    cfg = spec.antennas()
    sigma2 = dbm_to_watts(spec.noise_dbm)
    key = (spec.seed, t)
    rows = []
    for var, val in spec.points():
        prm = _point_params(spec, var, val)
        try:
            geo = Geometry.standard(spec.r, prm["eve"], spec.path_loss_exp)
            cs = draw_channels(cfg, geo, prm["rho_b"], prm["rho_e"], sigma2, dbm_to_watts(prm["power_dbm"]), key)
            est = perturb_csi(cs, CsiPerturbation(prm["alpha_h"], "H", key))
            est = perturb_csi(est, CsiPerturbation(prm["alpha_g"], "G", key))
            res = _evaluate(cs, est, spec.schemes)
            rows.append([res[s] for s in spec.schemes])
        except (NumericalError, np.linalg.LinAlgError):
            rows.append([None] * len(spec.schemes))
    return rows


def _run_chunk(spec: ScenarioSpec, trials: range):
    return [_run_trial(spec, t) for t in trials]


@dataclass
class SimResult:
    rows: list
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([r["sweep_var"], repr(r["sweep_value"]), r["scheme"],
                        repr(r["mean_secrecy_rate_bits"]), repr(r["mean_rb_bits"]),
                        repr(r["mean_re_bits"]), r["k_streams"], r["trials"]])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"rows": self.rows, "metadata": self.metadata}, indent=2, sort_keys=True) + "\n"

    def lookup(self, sweep_var: str, scheme: str) -> list:
        return [r for r in self.rows if r["sweep_var"] == sweep_var and r["scheme"] == scheme]


def run_scenario(spec: ScenarioSpec, workers: int = 1) -> SimResult:
    """Monte-Carlo averages for every sweep point and scheme.

    ``workers > 1`` fans trials out over processes; the result is identical
    to a serial run.
    """
    n = spec.trials
    if workers > 1 and n > 1:
        bounds = np.linspace(0, n, min(workers, n) + 1).astype(int)
        chunks = [range(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, [spec] * len(chunks), chunks))
        per_trial = [row for part in parts for row in part]
    else:
        per_trial = _run_chunk(spec, range(n))

    rows = []
    failures = {}
    for p, (var, val) in enumerate(spec.points()):
        for s, scheme in enumerate(spec.schemes):
            cells = [per_trial[t][p][s] for t in range(n)]
            ok = [c for c in cells if c is not None]
            failed = n - len(ok)
            if failed > MAX_FAIL_FRACTION * n:
                raise SimulationError(f"{failed}/{n} trials failed at {var}={val}, scheme {scheme}")
            if failed:
                failures[f"{var}={val!r}/{scheme}"] = failed
            if ok:
                sec = math.fsum(max(c[0] - c[1], 0.0) for c in ok) / len(ok)
                rb = math.fsum(c[0] for c in ok) / len(ok)
                re_ = math.fsum(c[1] for c in ok) / len(ok)
                ks = Counter(c[2] for c in ok)
                k = min(ks, key=lambda v: (-ks[v], v))
            else:
                sec = rb = re_ = 0.0
                k = 0
            rows.append({
                "sweep_var": var,
                "sweep_value": val,
                "scheme": scheme,
                "mean_secrecy_rate_bits": sec,
                "mean_rb_bits": rb,
                "mean_re_bits": re_,
                "k_streams": k,
                "trials": len(ok),
            })
    meta = {
        "seed": spec.seed,
        "config_digest": spec.digest(),
        "artifact_version": __version__,
        "failed_trials": failures,
        "spec": spec.to_dict(),
    }
    return SimResult(rows, meta)
