"""Closed form versus exhaustive search over whole antenna grids."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import dof

DEFAULT_BOUNDS = (10, 12, 12)
DEFAULT_HELPER_BOUNDS = (15, 12, 12)


@dataclass
class Check:
    name: str
    checked: int
    failures: list = field(default_factory=list)
    fields: tuple = ()
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class VerificationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "checked": c.checked,
                    "mismatches": len(c.failures),
                    "seconds": round(c.seconds, 3),
                    "counterexamples": [dict(zip(c.fields, f)) for f in c.failures],
                }
                for c in self.checks
            ],
        }


def run_verification(bounds=DEFAULT_BOUNDS, helper_bounds=DEFAULT_HELPER_BOUNDS, backend=None) -> VerificationReport:
    """Run every oracle-equivalence sweep.

    ``bounds`` is ``(na_max, nb_max, ne_max)``; Eve's split counts and her
    total range over ``0..ne_max``. ``helper_bounds`` is
    ``(nsum_max, ns_max, nep_max)``. ``backend`` defaults to whichever
    kernel ``dof`` loaded.
    """
    k = dof.kernel if backend is None else backend
    na, nb, ne = (int(b) for b in bounds)
    hs, hn, hp = (int(b) for b in helper_bounds)
    if na < 1 or nb < 1 or ne < 0 or min(hs, hn, hp) < 0:
        raise ValueError("grid bounds must be n_a, n_b >= 1 and the rest >= 0")
    checks = []

    t0 = time.perf_counter()
    n, bad = k.split_max_sweep(na, nb, ne)
    checks.append(Check("max_over_split", n, list(bad),
                        ("n_a", "n_b", "n_e_t", "n_e_r", "formula", "n_b_t", "oracle"),
                        time.perf_counter() - t0))

    t0 = time.perf_counter()
    n, bad, cor1, cor2 = k.worst_case_sweep(na, nb, ne)
    dt = time.perf_counter() - t0
    checks.append(Check("worst_case", n, list(bad), ("n_a", "n_b", "n_e", "formula", "oracle"), dt))
    checks.append(Check("argmin_at_extreme", n, list(cor1), ("n_a", "n_b", "n_e", "dof", "argmin"), 0.0))
    checks.append(Check("more_bob_than_eve_positive", n, list(cor2), ("n_a", "n_b", "n_e", "dof"), 0.0))

    t0 = time.perf_counter()
    n, bad = k.helper_max_sweep(hs, hn, hp)
    checks.append(Check("helper_optimum", n, list(bad),
                        ("n_sum", "n_s", "n_ep", "closed_form", "n_h", "at_n_h", "exhaustive"),
                        time.perf_counter() - t0))

    t0 = time.perf_counter()
    n, bad = k.budget_sweep(hs, hn, hp)
    checks.append(Check("greedy_budget", n, list(bad),
                        ("n_s", "n_h", "n_d", "n_ep", "greedy", "helper_g"),
                        time.perf_counter() - t0))
    return VerificationReport(checks)
