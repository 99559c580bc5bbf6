"""Scenario geometry, random-phase path-loss channels and Gauss-Markov CSI errors.

Randomness is indexed, not sequential: every matrix draws from its own
``SeedSequence`` built from ``(*seed, stream_id)``, where ``seed`` is an
int or a tuple such as ``(master_seed, trial)``. Two calls with the same key
give bit-identical matrices no matter what was drawn before.

Bob's matrices are always drawn for his full array and sliced to the
requested split (first ``n_b_t`` antennas transmit), so configurations that
differ only in Bob's split see the same propagation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .dof import AntennaConfig

# stream ids for SeedSequence keys
_LINKS = ("ba", "bb", "be", "ea", "eb", "ee")
_PHASE_STREAM = {name: i for i, name in enumerate(_LINKS)}
_ERROR_STREAM = {name: 100 + i for i, name in enumerate(_LINKS)}
FAMILIES = {"H": ("ba", "bb", "be"), "G": ("ea", "eb", "ee")}


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(x_w: float) -> float:
    return 10.0 * math.log10(x_w) + 30.0


def _key(seed) -> list[int]:
    if isinstance(seed, (int, np.integer)):
        return [int(seed)]
    return [int(s) for s in seed]


def _rng(seed, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_key(seed) + [stream]))


@dataclass(frozen=True)
class Geometry:
    alice_pos: tuple[float, float]
    bob_pos: tuple[float, float]
    eve_pos: tuple[float, float]
    path_loss_exp: float = 3.5

    def __post_init__(self):
        pts = (self.alice_pos, self.bob_pos, self.eve_pos)
        if not all(math.isfinite(c) for p in pts for c in p):
            raise ValueError("node positions must be finite")
        if not 2.0 <= self.path_loss_exp <= 4.0:
            warnings.warn(f"path-loss exponent {self.path_loss_exp} outside the usual [2, 4]", stacklevel=2)

    @classmethod
    def standard(cls, r: float, eve_pos=None, path_loss_exp: float = 3.5) -> "Geometry":
        """Alice at (-r, 0), Bob at (r, 0); Eve defaults to (0, -r)."""
        eve = (0.0, -r) if eve_pos is None else tuple(eve_pos)
        return cls((-r, 0.0), (r, 0.0), eve, path_loss_exp)

    @classmethod
    def unit(cls, path_loss_exp: float = 3.5) -> "Geometry":
        """Equilateral triangle with unit sides: every link has unit gain."""
        return cls((-0.5, 0.0), (0.5, 0.0), (0.0, -math.sqrt(3.0) / 2.0), path_loss_exp)

    def with_eve(self, eve_pos) -> "Geometry":
        return replace(self, eve_pos=tuple(eve_pos))

    def distance(self, a: str, b: str) -> float:
        pa = getattr(self, f"{a}_pos")
        pb = getattr(self, f"{b}_pos")
        return math.hypot(pa[0] - pb[0], pa[1] - pb[1])

    def amplitude(self, a: str, b: str) -> float:
        d = self.distance(a, b)
        if d <= 0.0:
            raise ValueError(f"{a} and {b} share a position; path loss undefined")
        return d ** (-self.path_loss_exp / 2.0)


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """All six channels of one realization, stored for Bob's full array.

    ``norm[link]`` holds the small-scale part (unit-modulus phases unless
    perturbed) and ``amp[link]`` the common path-loss amplitude, so the
    channel is ``amp * norm`` sliced to the current split.
    """

    cfg: AntennaConfig
    norm: dict = field(repr=False)
    amp: dict
    rho_b: float
    rho_e: float
    sigma2: float
    power: float

    def __post_init__(self):
        for name in ("rho_b", "rho_e"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    def _full(self, link: str) -> np.ndarray:
        return self.amp[link] * self.norm[link]

    @property
    def h_ba(self) -> np.ndarray:
        return self._full("ba")[self.cfg.n_b_t:, :]

    @property
    def h_bb(self) -> np.ndarray:
        t = self.cfg.n_b_t
        return self._full("bb")[t:, :t]

    @property
    def h_be(self) -> np.ndarray:
        return self._full("be")[self.cfg.n_b_t:, :]

    @property
    def g_ea(self) -> np.ndarray:
        return self._full("ea")

    @property
    def g_eb(self) -> np.ndarray:
        return self._full("eb")[:, : self.cfg.n_b_t]

    @property
    def g_ee(self) -> np.ndarray:
        return self._full("ee")

    def resplit(self, n_b_t: int) -> "ChannelSet":
        return replace(self, cfg=self.cfg.with_bob_split(n_b_t))

    def with_params(self, **kw) -> "ChannelSet":
        return replace(self, **kw)


def _full_shapes(cfg: AntennaConfig) -> dict:
    n_e_r = cfg.n_e_r
    return {
        "ba": (cfg.n_b, cfg.n_a),
        "bb": (cfg.n_b, cfg.n_b),
        "be": (cfg.n_b, cfg.n_e_t),
        "ea": (n_e_r, cfg.n_a),
        "eb": (n_e_r, cfg.n_b),
        "ee": (n_e_r, cfg.n_e_t),
    }


def draw_channels(cfg: AntennaConfig, geo: Geometry, rho_b: float, rho_e: float,
                  sigma2: float, power: float, seed) -> ChannelSet:
    """Random-phase channels with distance path loss.

    Inter-node entries are ``d**(-c/2) * exp(j theta)``; the loop channels at
    Bob and Eve use unit amplitude, their strength being set by ``rho_b`` and
    ``rho_e`` alone.
    """
    amp = {
        "ba": geo.amplitude("bob", "alice"),
        "be": geo.amplitude("bob", "eve"),
        "ea": geo.amplitude("eve", "alice"),
        "eb": geo.amplitude("eve", "bob"),
        "bb": 1.0,
        "ee": 1.0,
    }
    norm = {}
    for link, shape in _full_shapes(cfg).items():
        theta = _rng(seed, _PHASE_STREAM[link]).uniform(0.0, 2.0 * np.pi, size=shape)
        norm[link] = np.exp(1j * theta)
    return ChannelSet(cfg, norm, amp, float(rho_b), float(rho_e), float(sigma2), float(power))


@dataclass(frozen=True)
class CsiPerturbation:
    alpha: float
    target: str  # "H" (into Bob) or "G" (into Eve)
    seed: object = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha={self.alpha} outside [0, 1]")
        if self.target not in FAMILIES:
            raise ValueError(f"target must be one of {sorted(FAMILIES)}, got {self.target!r}")


def perturb_csi(cs: ChannelSet, pert: CsiPerturbation) -> ChannelSet:
    """Gauss-Markov estimate ``sqrt(1-a^2) G + a dG`` of one link family.

    The error matrices are drawn for full arrays, like the channels, so the
    same seed perturbs every Bob split consistently.
    """
    if pert.alpha == 0.0:
        return cs
    a = pert.alpha
    shapes = _full_shapes(cs.cfg)
    norm = dict(cs.norm)
    for link in FAMILIES[pert.target]:
        rng = _rng(pert.seed, _ERROR_STREAM[link])
        shape = shapes[link]
        err = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
        norm[link] = math.sqrt(1.0 - a * a) * cs.norm[link] + a * err
    return replace(cs, norm=norm)
