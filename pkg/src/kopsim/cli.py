"""Command-line entry point: ``kopsim run`` and ``kopsim validate``."""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import output, validation
from .config import PRESET_NAMES, ConfigError, parse_scenario, preset, validate as validate_config
from .engine import run as engine_run

EXIT_OK = 0
EXIT_ORACLE_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3


def _load_scenario(spec: str, paper_scale: bool):
    if spec in PRESET_NAMES:
        return preset(spec, paper_scale=paper_scale)
    path = Path(spec)
    if not path.exists():
        raise ConfigError("scenario", f"no such preset or file: {spec}")
    return parse_scenario(path.read_text())


def _cmd_run(args) -> int:
    try:
        cfg = _load_scenario(args.scenario, args.paper_scale)
        if args.seed is not None:
            cfg = replace(cfg, sim=replace(cfg.sim, seed=args.seed))
        if args.particles is not None:
            cfg = replace(cfg, sim=replace(cfg.sim, n_particles=args.particles))
        validate_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    t0 = time.perf_counter()
    result = engine_run(cfg, threads=args.threads)
    wall = time.perf_counter() - t0
    try:
        out = output.write_bundle(result, args.out, wall_time_s=wall, threads=args.threads)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    print(f"wrote bundle to {out} ({wall:.1f} s, "
          f"{len(result.snapshots)} snapshots, diagnostics {result.diagnostics})")
    return EXIT_OK


def _cmd_validate(args) -> int:
    names = list(validation.SUITES) if args.suite == "all" else [args.suite]
    rows = validation.run_suites(names)
    n_fail = 0
    for row in rows:
        status = "PASS" if row.passed else "FAIL"
        n_fail += 0 if row.passed else 1
        print(f"[{status}] {row.suite}/{row.name}: oracle={row.oracle_value:.6g} "
              f"observed={row.observed_value:.6g} tol={row.tolerance:.3g}")
    if args.out:
        try:
            path = Path(args.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            lines = ["suite,name,oracle_value,observed_value,tolerance,passed"]
            lines += [f"{r.suite},{r.name},{r.oracle_value:.9g},{r.observed_value:.9g},"
                      f"{r.tolerance:.9g},{int(r.passed)}" for r in rows]
            path.write_text("\n".join(lines) + "\n")
        except OSError as exc:
            print(f"i/o error: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
    print(f"{len(rows) - n_fail}/{len(rows)} checks passed")
    return EXIT_OK if n_fail == 0 else EXIT_ORACLE_FAILURE


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="kopsim",
        description="Particle simulator for coupled opinion-popularity dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write an output bundle")
    p_run.add_argument("--scenario", required=True,
                       help=f"scenario TOML file or preset name ({', '.join(PRESET_NAMES)})")
    p_run.add_argument("--seed", type=int, default=None, help="override the RNG seed")
    p_run.add_argument("--particles", type=int, default=None, help="override the population size")
    p_run.add_argument("--out", default="out", help="bundle output directory")
    p_run.add_argument("--threads", type=int,
                       default=int(os.environ.get("KOPSIM_THREADS", "1")),
                       help="worker threads (default: env KOPSIM_THREADS or 1)")
    p_run.add_argument("--paper-scale", action="store_true",
                       help="use the full 10^6-particle preset populations")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="run the oracle validation suites")
    p_val.add_argument("--suite", default="all",
                       choices=[*validation.SUITES, "all"],
                       help="which suite to run (default: all)")
    p_val.add_argument("--out", default=None, help="optional CSV report path")
    p_val.set_defaults(func=_cmd_validate)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage (unknown suite, missing flags), which
        # matches the config-error exit code
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG_ERROR
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
