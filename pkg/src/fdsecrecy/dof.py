"""Closed-form secrecy-degrees-of-freedom calculus and brute-force oracles.

Everything here is integer arithmetic on antenna counts. The formulas live
in a small kernel that is compiled with Cython when possible; set
``FDSECRECY_PURE_PYTHON=1`` to force the interpreted fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

if os.environ.get("FDSECRECY_PURE_PYTHON"):
    from . import _dof_core_py as kernel
else:
    try:
        from . import _dof_core as kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _dof_core_py as kernel

BACKEND: str = kernel.BACKEND

__all__ = [
    "AntennaConfig",
    "HelperConfig",
    "DofResult",
    "BACKEND",
    "s1_s2",
    "helper_g",
    "helper_sdof_max",
    "helper_optimal_nh",
    "sdof_active",
    "sdof_active_max",
    "worst_case_sdof",
    "candidate_counts",
    "greedy_select_count",
    "oracle_max_over_split",
    "oracle_worst_case",
]


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts of Alice, Bob and Eve plus the transmit splits.

    The first ``n_b_t`` of Bob's antennas transmit jamming and the rest
    receive; likewise for Eve with ``n_e_t``.
    """

    n_a: int
    n_b: int
    n_b_t: int
    n_e: int
    n_e_t: int

    def __post_init__(self):
        if self.n_a < 1:
            raise ValueError(f"n_a must be >= 1, got {self.n_a}")
        if not 0 <= self.n_b_t <= self.n_b:
            raise ValueError(f"need 0 <= n_b_t <= n_b, got n_b_t={self.n_b_t}, n_b={self.n_b}")
        if not 0 <= self.n_e_t <= self.n_e:
            raise ValueError(f"need 0 <= n_e_t <= n_e, got n_e_t={self.n_e_t}, n_e={self.n_e}")

    @classmethod
    def from_splits(cls, n_a: int, n_b_t: int, n_b_r: int, n_e_t: int, n_e_r: int) -> "AntennaConfig":
        return cls(n_a=n_a, n_b=n_b_t + n_b_r, n_b_t=n_b_t, n_e=n_e_t + n_e_r, n_e_t=n_e_t)

    @property
    def n_b_r(self) -> int:
        return self.n_b - self.n_b_t

    @property
    def n_e_r(self) -> int:
        return self.n_e - self.n_e_t

    def with_bob_split(self, n_b_t: int) -> "AntennaConfig":
        return AntennaConfig(self.n_a, self.n_b, n_b_t, self.n_e, self.n_e_t)

    def helper(self) -> "HelperConfig":
        """Equivalent helper-assisted channel (valid when n_e_t < min(n_b_r, n_e_r))."""
        return HelperConfig(
            n_s=self.n_a,
            n_h=self.n_b_t,
            n_d=max(self.n_b_r - self.n_e_t, 0),
            n_ep=max(self.n_e_r - self.n_e_t, 0),
        )


@dataclass(frozen=True)
class HelperConfig:
    n_s: int
    n_h: int
    n_d: int
    n_ep: int

    def __post_init__(self):
        for name in ("n_s", "n_h", "n_d", "n_ep"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def n_sum(self) -> int:
        return self.n_h + self.n_d


@dataclass(frozen=True)
class DofResult:
    dof: int
    optimizer: int | None = None
    optimizer_set: tuple[int, ...] = field(default_factory=tuple)


def s1_s2(cfg: HelperConfig) -> tuple[int, int]:
    return kernel.s1_s2(cfg.n_s, cfg.n_h, cfg.n_d, cfg.n_ep)


def helper_g(cfg: HelperConfig) -> int:
    """Achievable S.D.o.F. of a helper-assisted channel at a fixed helper size."""
    return kernel.helper_g(cfg.n_s, cfg.n_h, cfg.n_d, cfg.n_ep)


def helper_sdof_max(n_sum: int, n_s: int, n_ep: int) -> int:
    """Best S.D.o.F. over every helper/destination split of ``n_sum`` antennas."""
    return kernel.helper_sdof_max(n_sum, n_s, n_ep)


def helper_optimal_nh(n_sum: int, n_s: int, n_ep: int) -> int:
    return kernel.helper_optimal_nh(n_sum, n_s, n_ep)


def sdof_active(cfg: AntennaConfig) -> int:
    """Achievable S.D.o.F. for the concrete Bob and Eve splits in ``cfg``."""
    return kernel.sdof_active(cfg.n_a, cfg.n_b, cfg.n_b_t, cfg.n_e_t, cfg.n_e_r)


def sdof_active_max(n_a: int, n_b: int, n_e_t: int, n_e_r: int) -> DofResult:
    """Maximum S.D.o.F. over Bob's split, with the canonical optimal ``n_b_t``.

    ``optimizer_set`` lists every optimal split (found by enumeration), since
    the closed form names only one of possibly several maximizers.
    """
    dof, n_b_t = kernel.sdof_active_max(n_a, n_b, n_e_t, n_e_r)
    _, arg = kernel.oracle_max_over_split(n_a, n_b, n_e_t, n_e_r)
    return DofResult(dof=dof, optimizer=n_b_t, optimizer_set=tuple(arg))


def worst_case_sdof(n_a: int, n_b: int, n_e: int) -> DofResult:
    """S.D.o.F. when Eve picks the split that hurts most, plus her minimizing splits."""
    dof = kernel.worst_case_sdof(n_a, n_b, n_e)
    _, arg = kernel.oracle_worst_case(n_a, n_b, n_e)
    return DofResult(dof=dof, optimizer=arg[0], optimizer_set=tuple(arg))


def candidate_counts(cfg: HelperConfig) -> tuple[int, int, int]:
    """Generic sizes of the C1, C2 and C3 candidate sets."""
    s1, s2 = s1_s2(cfg)
    return max(cfg.n_s - cfg.n_ep, 0), s1, s2


def greedy_select_count(counts: tuple[int, int, int], n_d: int, n_s: int) -> int:
    return kernel.greedy_select_count(counts[0], counts[1], counts[2], n_d, n_s)


def oracle_max_over_split(n_a: int, n_b: int, n_e_t: int, n_e_r: int) -> DofResult:
    best, arg = kernel.oracle_max_over_split(n_a, n_b, n_e_t, n_e_r)
    return DofResult(dof=best, optimizer=arg[0], optimizer_set=tuple(arg))


def oracle_worst_case(n_a: int, n_b: int, n_e: int) -> DofResult:
    worst, arg = kernel.oracle_worst_case(n_a, n_b, n_e)
    return DofResult(dof=worst, optimizer=arg[0], optimizer_set=tuple(arg))
