#!/usr/bin/env python3
"""Time the integer verification sweeps on the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

from fdsecrecy import _dof_core_py

try:
    from fdsecrecy import _dof_core
except ImportError:
    _dof_core = None

SWEEPS = {
    "split_max_sweep": (10, 12, 12),
    "worst_case_sweep": (10, 12, 12),
    "helper_max_sweep": (15, 12, 12),
    "budget_sweep": (15, 12, 12),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = [("python", _dof_core_py)]
    if _dof_core is None:
        print("compiled kernel not built; timing the Python fallback only")
    else:
        backends.append(("cython", _dof_core))

    print(f"{'sweep':<18}{'backend':<9}{'best [ms]':>11}{'speedup':>9}")
    for name, bounds in SWEEPS.items():
        base = None
        for label, mod in backends:
            fn = getattr(mod, name)
            t = min(timeit.repeat(lambda: fn(*bounds), number=1, repeat=args.repeat))
            base = base or t
            print(f"{name:<18}{label:<9}{1e3 * t:>11.2f}{base / t:>8.1f}x")
        # both kernels must agree, or the timing is meaningless
        if len(backends) == 2:
            assert getattr(_dof_core_py, name)(*bounds) == getattr(_dof_core, name)(*bounds), name


if __name__ == "__main__":
    main()
