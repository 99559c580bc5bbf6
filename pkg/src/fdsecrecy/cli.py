"""``fdsecrecy`` command-line front end.

Exit status: 0 success, 2 bad arguments or config, 3 numerical failure,
4 verification mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import fields
from importlib import resources
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import dof
from .numerics import NumericalError
from .simulator import ScenarioSpec, SimulationError, run_scenario
from .verify import DEFAULT_BOUNDS, DEFAULT_HELPER_BOUNDS, run_verification

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4
OUT_DIR_ENV = "FDSECRECY_OUT_DIR"

_SPEC_KEYS = {f.name for f in fields(ScenarioSpec)}
_EXTRA_KEYS = {"sweep_range"}


class UsageError(ValueError):
    pass


def _emit(rows: list[dict], fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(rows if len(rows) != 1 else rows[0], stream, indent=2)
        stream.write("\n")
        return
    if not rows:
        return
    w = csv.DictWriter(stream, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: " ".join(map(str, v)) if isinstance(v, (list, tuple)) else v for k, v in r.items()})


def _cmd_sdof(a) -> int:
    n_e = a.net + a.ner
    if a.nbt is None:
        dof.AntennaConfig(a.na, a.nb, 0, n_e, a.net)
        res = dof.sdof_active_max(a.na, a.nb, a.net, a.ner)
        row = {"n_a": a.na, "n_b": a.nb, "n_e_t": a.net, "n_e_r": a.ner,
               "dof": res.dof, "nbt_star": res.optimizer, "argmax_set": list(res.optimizer_set)}
    else:
        cfg = dof.AntennaConfig(a.na, a.nb, a.nbt, n_e, a.net)
        row = {"n_a": a.na, "n_b": a.nb, "n_b_t": a.nbt, "n_e_t": a.net, "n_e_r": a.ner,
               "dof": dof.sdof_active(cfg)}
    _emit([row], a.format)
    return EXIT_OK


def _eve_strategy(n_e: int, argmin) -> str:
    lo, hi = 0 in argmin, n_e in argmin
    if n_e == 0 or (lo and hi):
        return "either"
    if hi:
        return "jam_only"
    if lo:
        return "eavesdrop_only"
    return "mixed"


def _cmd_worstcase(a) -> int:
    if a.na < 1 or a.nb < 0 or a.ne < 0:
        raise UsageError("need --na >= 1 and non-negative --nb, --ne")
    res = dof.worst_case_sdof(a.na, a.nb, a.ne)
    row = {"n_a": a.na, "n_b": a.nb, "n_e": a.ne, "dof": res.dof,
           "argmin_set": list(res.optimizer_set), "eve_strategy": _eve_strategy(a.ne, res.optimizer_set)}
    _emit([row], a.format)
    return EXIT_OK


def _cmd_verify(a) -> int:
    rep = run_verification(a.bounds, a.helper_bounds)
    if a.format == "json":
        _emit([rep.to_dict()], "json")
    else:
        _emit([{"check": c.name, "checked": c.checked, "mismatches": len(c.failures),
                "status": "pass" if c.ok else "FAIL"} for c in rep.checks], "csv")
        for c in rep.checks:
            if c.failures:
                sys.stderr.write(f"# counterexamples: {c.name}\n")
                _emit([dict(zip(c.fields, f)) for f in c.failures], "csv", sys.stderr)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def resolve_config(name: str) -> Path:
    """A filesystem path, or the name of a shipped preset such as ``fig4``."""
    p = Path(name)
    if p.exists():
        return p
    stem = name[:-4] if name.endswith(".cfg") else name
    preset = resources.files("fdsecrecy") / "presets" / f"{stem}.cfg"
    if preset.is_file():
        return Path(str(preset))
    raise UsageError(f"no such config file or preset: {name}")


def load_spec(path, **overrides) -> ScenarioSpec:
    """Parse a flat TOML scenario file; unknown keys are rejected."""
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text())
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    unknown = set(data) - _SPEC_KEYS - _EXTRA_KEYS
    if unknown:
        raise UsageError(f"{path}: unknown keys {', '.join(sorted(unknown))}")
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise UsageError(f"{path}: tables are not allowed ({', '.join(nested)})")
    if "sweep_range" in data:
        if "sweep_values" in data:
            raise UsageError(f"{path}: give sweep_values or sweep_range, not both")
        rng = data.pop("sweep_range")
        if not (isinstance(rng, list) and len(rng) == 3 and rng[2] > 0):
            raise UsageError(f"{path}: sweep_range must be [start, stop, step] with step > 0")
        start, stop, step = (float(x) for x in rng)
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        data["sweep_values"] = [round(start + i * step, 12) for i in range(max(n, 0))]
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ScenarioSpec(**data)
    except TypeError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _cmd_simulate(a) -> int:
    path = resolve_config(a.config)
    spec = load_spec(path, trials=a.trials, seed=a.seed)
    if a.workers < 1:
        raise UsageError("--workers must be >= 1")
    res = run_scenario(spec, workers=a.workers)
    if a.out:
        out = Path(a.out)
    else:
        out = Path(os.environ.get(OUT_DIR_ENV, ".")) / f"{path.stem}.{a.format}"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(res.to_json() if a.format == "json" else res.to_csv())
    meta = out.with_name(out.name + ".meta.json")
    meta.write_text(json.dumps(res.metadata, indent=2, sort_keys=True) + "\n")
    summary = {"output": str(out), "seed": spec.seed, "config_digest": res.metadata["config_digest"]}
    _emit([summary], a.format)
    return EXIT_OK


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="fdsecrecy", parents=[common],
                                description="Secrecy degrees of freedom with a full-duplex active eavesdropper.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sdof", parents=[common], help="achievable S.D.o.F., optimised over Bob's split unless --nbt")
    s.add_argument("--na", type=_nonneg, required=True)
    s.add_argument("--nb", type=_nonneg, required=True)
    s.add_argument("--nbt", type=_nonneg)
    s.add_argument("--net", type=_nonneg, required=True)
    s.add_argument("--ner", type=_nonneg, required=True)
    s.set_defaults(func=_cmd_sdof)

    w = sub.add_parser("worstcase", parents=[common], help="S.D.o.F. under Eve's most harmful split")
    w.add_argument("--na", type=_nonneg, required=True)
    w.add_argument("--nb", type=_nonneg, required=True)
    w.add_argument("--ne", type=_nonneg, required=True)
    w.set_defaults(func=_cmd_worstcase)

    v = sub.add_parser("verify", parents=[common], help="closed forms against exhaustive search")
    v.add_argument("--bounds", nargs=3, type=_nonneg, default=DEFAULT_BOUNDS, metavar=("NA", "NB", "NE"))
    v.add_argument("--helper-bounds", nargs=3, type=_nonneg, default=DEFAULT_HELPER_BOUNDS,
                   metavar=("NSUM", "NS", "NEP"))
    v.set_defaults(func=_cmd_verify)

    m = sub.add_parser("simulate", parents=[common], help="Monte-Carlo secrecy-rate sweep")
    m.add_argument("config", help="scenario file or preset name (fig4 ... fig9)")
    m.add_argument("--trials", type=int)
    m.add_argument("--seed", type=_nonneg)
    m.add_argument("--out")
    m.add_argument("--workers", type=int, default=1)
    m.set_defaults(func=_cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = "csv"
    try:
        return args.func(args)
    except (NumericalError, SimulationError) as exc:
        print(f"fdsecrecy: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"fdsecrecy: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
