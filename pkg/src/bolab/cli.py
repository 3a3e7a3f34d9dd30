"""Command-line entry point.

    bolab <subcommand> --config cfg.json --out outdir [--set key=val ...]
          [--threads N] [--seed S] [-v]

Subcommands: solve, gauge-check, smoothing, growth, bilinear, norms,
selftest.  The config is a single JSON file with nested sections; unknown
sections or keys are hard errors so misspellings cannot silently fall back
to defaults.  Dotted-path overrides (--set solver.dt=5e-4) are applied
after loading.  Exit codes: 0 success, 1 validation error, 2 numerical
failure; failures also leave a machine-readable error.json in the output
directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .bilinear import BilinearSweepConfig, run_ratio_sweep
from .experiments import (
    DataGenSpec,
    ExperimentConfig,
    run_conservation,
    run_gauge_residual,
    run_growth,
    run_norms,
    run_smoothing,
    write_csv,
    write_json,
)
from .selftest import run_selftest
from .solver import BlowUpError, ConservationError, SolverConfig
from .storage import save_trajectory


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "grid": {"n_modes"},
    "solver": {
        "dt", "t_end", "integrator", "dealias", "record_every",
        "conservation_tolerance", "conservation_action", "nonlinear",
    },
    "data": {"kind", "s_target", "target_norm", "decay_offset", "seed", "mode"},
    "experiment": {"kind", "s", "a_grid", "n_grid", "seed", "ensemble", "t_end", "eps"},
    "bilinear": {"mj_pairs", "k_values", "ensemble", "seed", "n_tau", "dtau", "delta"},
}


def load_config(path, overrides=()):
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key.path=value")
        dotted, _, text = item.partition("=")
        parts = dotted.split(".")
        if len(parts) != 2:
            raise ConfigError(f"override path {dotted!r} must be section.key")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        raw.setdefault(parts[0], {})[parts[1]] = value
    for section, keys in raw.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section {section!r}")
        if not isinstance(keys, dict):
            raise ConfigError(f"section {section!r} must be an object")
        unknown = set(keys) - _SCHEMA[section]
        if unknown:
            raise ConfigError(
                f"unknown keys in section {section!r}: {sorted(unknown)} "
                f"(allowed: {sorted(_SCHEMA[section])})"
            )
    return raw


def _experiment_config(raw, kind, seed_override=None) -> ExperimentConfig:
    try:
        solver_cfg = SolverConfig(**raw.get("solver", {}))
        data_cfg = DataGenSpec(**raw.get("data", {}))
        exp = dict(raw.get("experiment", {}))
        exp.setdefault("kind", kind)
        if exp["kind"] != kind:
            raise ConfigError(f"experiment.kind={exp['kind']!r} does not match subcommand {kind!r}")
        exp.setdefault("s", 0.75)
        if "n_grid" not in exp and "grid" in raw:
            exp["n_grid"] = [raw["grid"]["n_modes"]]
        if "a_grid" in exp:
            exp["a_grid"] = tuple(exp["a_grid"])
        if "n_grid" in exp:
            exp["n_grid"] = tuple(exp["n_grid"])
        if seed_override is not None:
            exp["seed"] = seed_override
            data_cfg = DataGenSpec(**{**raw.get("data", {}), "seed": seed_override})
        return ExperimentConfig(solver=solver_cfg, data_gen=data_cfg, **exp)
    except TypeError as exc:
        raise ConfigError(str(exc))
    except ValueError as exc:
        raise ConfigError(str(exc))


def _manifest(out: Path, command: str, raw_config: dict, seed, wall: float, outputs):
    write_json(
        out / "manifest.json",
        {
            "command": command,
            "version": __version__,
            "config": raw_config,
            "seed": seed,
            "outputs": sorted(str(o) for o in outputs),
            "wall_time_s": wall,  # excluded from determinism comparisons
        },
    )


def _outputs(out: Path):
    return [p.relative_to(out) for p in sorted(out.rglob("*")) if p.is_file()]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bolab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    commands = ("solve", "gauge-check", "smoothing", "growth", "bilinear", "norms", "selftest")
    for name in commands:
        p = sub.add_parser(name)
        if name != "selftest":
            p.add_argument("--config", required=True)
            p.add_argument("--out", required=True)
            p.add_argument("--set", action="append", default=[], dest="overrides",
                           metavar="KEY=VALUE")
            p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
            p.add_argument("--seed", type=int, default=None)
        p.add_argument("-v", "--verbose", action="count", default=0)
    args = parser.parse_args(argv)

    if args.command == "selftest":
        return 0 if run_selftest() else 1

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    try:
        raw = load_config(args.config, args.overrides)
        if args.command == "solve":
            cfg = _experiment_config(raw, "conservation", args.seed)
            summary, traj = run_conservation(cfg, out)
            save_trajectory(out / "trajectory.bot", traj)
        elif args.command == "gauge-check":
            cfg = _experiment_config(raw, "gauge_residual", args.seed)
            summary = run_gauge_residual(cfg, out)
        elif args.command == "norms":
            cfg = _experiment_config(raw, "conservation", args.seed)
            summary = run_norms(cfg, out)
        elif args.command == "smoothing":
            cfg = _experiment_config(raw, "smoothing", args.seed)
            summary = run_smoothing(cfg, out, workers=args.threads)
        elif args.command == "growth":
            cfg = _experiment_config(raw, "growth", args.seed)
            summary = run_growth(cfg, out)
        elif args.command == "bilinear":
            section = dict(raw.get("bilinear", {}))
            if args.seed is not None:
                section["seed"] = args.seed
            if "mj_pairs" in section:
                section["mj_pairs"] = tuple(tuple(p) for p in section["mj_pairs"])
            if "k_values" in section:
                section["k_values"] = tuple(section["k_values"])
            try:
                sweep_cfg = BilinearSweepConfig(**section)
            except (TypeError, ValueError) as exc:
                raise ConfigError(str(exc))
            rows, summary = run_ratio_sweep(sweep_cfg)
            write_csv(out / "bilinear_ratios.csv", ["k", "m", "j", "seed", "ratio"], rows)
            summary = {"kind": "bilinear", "version": __version__,
                       "config": section, "per_mj": summary}
            write_json(out / "bilinear_summary.json", summary)
    except ConfigError as exc:
        _fail(out, args.command, 1, "validation", str(exc))
        return 1
    except (BlowUpError, ConservationError, FloatingPointError) as exc:
        _fail(out, args.command, 2, type(exc).__name__, str(exc))
        return 2
    except ValueError as exc:
        _fail(out, args.command, 1, "validation", str(exc))
        return 1

    seed = args.seed
    if seed is None:
        seed = raw.get("experiment", {}).get("seed", raw.get("bilinear", {}).get("seed", 0))
    _manifest(out, args.command, raw, seed, time.monotonic() - started, _outputs(out))
    if args.verbose:
        print(json.dumps({k: v for k, v in summary.items() if k != "config"}, indent=2,
                         sort_keys=True, default=str))
    return 0


def _fail(out: Path, command: str, code: int, kind: str, message: str) -> None:
    write_json(out / "error.json", {"command": command, "error": kind,
                                    "message": message, "exit_code": code})
    print(f"bolab {command}: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
