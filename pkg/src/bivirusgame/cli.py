"""Command-line batch interface.

Subcommands (each takes a config file; see :mod:`bivirusgame.harness` for
the key-value schema):

* ``validate``   -- parse and check a config, print the parameter report
* ``run``        -- integrate all initial states, match and classify
* ``equilibria`` -- enumerate and classify all fixed points and lines
* ``sweep``      -- grid sweep over 1-2 parameters, write sweep.csv
* ``phase``      -- run a scenario and export phase-portrait data

Exit codes: 0 success, 1 config error, 2 numerical failure, 3 run
completed but some terminal state matched no known equilibrium.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import warnings
from pathlib import Path

import numpy as np

from .equilibria import coexistence_lines, enumerate_isolated
from .errors import BivirusError, ConfigError, InvalidParamsError, StateSpaceError
from .harness import (ScenarioConfig, SweepConfig, load_config, run_scenario,
                      run_sweep, export_phase_plot)
from .model import validate_params, vector_field_norm
from .stability import classify_line, classify_point

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_UNMATCHED = 3


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="path to a key=value config file")
    common.add_argument("--out", help="output directory (overrides the config)")
    common.add_argument("--format", dest="formats",
                        help="comma list of output formats: csv,json,svg")
    common.add_argument("--strict", action="store_true",
                        help="escalate the soft modeling checks "
                             "(r1 < r2, c_i > c_d) to hard errors")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized verification utilities")

    parser = argparse.ArgumentParser(
        prog="bivirusgame",
        description="bi-virus epidemic + social-distancing game toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common],
                   help="check a config file and its parameters")
    sub.add_parser("run", parents=[common],
                   help="integrate the configured initial states")
    sub.add_parser("equilibria", parents=[common],
                   help="enumerate and classify all fixed points")
    sub.add_parser("sweep", parents=[common],
                   help="classify equilibria over a parameter grid")
    sub.add_parser("phase", parents=[common],
                   help="export phase-portrait data for a scenario")
    return parser


def _load(args) -> ScenarioConfig | SweepConfig:
    cfg = load_config(args.config, strict=args.strict)
    base = cfg.base if isinstance(cfg, SweepConfig) else cfg
    changes = {}
    if args.out:
        changes["outputs"] = args.out
    if args.formats:
        changes["formats"] = tuple(s.strip() for s in args.formats.split(","))
    if changes:
        base = dataclasses.replace(base, **changes)
        if isinstance(cfg, SweepConfig):
            cfg = dataclasses.replace(cfg, base=base)
        else:
            cfg = base
    return cfg


def _cmd_validate(args) -> int:
    cfg = _load(args)
    base = cfg.base if isinstance(cfg, SweepConfig) else cfg
    report = validate_params(base.params, strict=args.strict)
    for check in report.checks:
        status = "ok" if check.passed else check.severity.upper()
        print(f"{check.name:32s} {status:8s} margin={check.margin:+.6g}")
    kind = "sweep" if isinstance(cfg, SweepConfig) else "scenario"
    print(f"config ok: {kind} with {len(base.initial_states)} initial state(s)")
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = _load(args)
    if isinstance(cfg, SweepConfig):
        raise ConfigError("'run' expects a scenario config (no axis keys)")
    result = run_scenario(cfg)
    failed = unmatched = False
    for tr in result.trajectories:
        if tr.error is not None:
            failed = True
            print(f"traj {tr.index}: FAILED {tr.error}")
            continue
        conv = f"converged t={tr.trajectory.converged_at:.6g}" \
            if tr.converged else "reached t_max"
        if tr.matched_kind is None:
            unmatched = True
            print(f"traj {tr.index}: {conv}; UNMATCHED "
                  f"(nearest candidate at distance {tr.matched_distance:.3g})")
        else:
            verdict = tr.report.numeric_verdict
            print(f"traj {tr.index}: {conv}; matched {tr.matched_kind} "
                  f"(distance {tr.matched_distance:.3g}, {verdict})")
    for name in sorted(result.files):
        print(f"wrote {result.files[name]}")
    if failed:
        return EXIT_NUMERICAL
    if unmatched:
        return EXIT_UNMATCHED
    return EXIT_OK


def _cmd_equilibria(args) -> int:
    cfg = _load(args)
    base = cfg.base if isinstance(cfg, SweepConfig) else cfg
    p = base.params
    print(f"{'kind':6s} {'exists':7s} {'numeric':11s} {'closed form':13s} point")
    for eq in enumerate_isolated(p):
        if eq.exists:
            rep = classify_point(p, eq)
            pt = eq.point
            coords = (f"({pt.y1:.6g}, {pt.y2:.6g}, {pt.z_s:.6g}, "
                      f"{pt.z1:g}, {pt.z2:g})")
            print(f"{eq.kind:6s} {'yes':7s} {rep.numeric_verdict:11s} "
                  f"{str(rep.closed_form_verdict):13s} {coords}")
        else:
            worst = min(eq.existence_conditions, key=lambda c: c.margin)
            print(f"{eq.kind:6s} {'no':7s} {'-':11s} {'-':13s} "
                  f"fails: {worst.label} (margin {worst.margin:+.3g})")
    rng = np.random.default_rng(args.seed)
    for line in coexistence_lines(p):
        if not line.exists:
            worst = min(line.existence_conditions, key=lambda c: c.margin)
            print(f"{line.kind:6s} {'no':7s} {'-':11s} {'-':13s} "
                  f"fails: {worst.label} (margin {worst.margin:+.3g})")
            continue
        rep = classify_line(p, line)
        lo, hi = line.param_range
        print(f"{line.kind:6s} {'yes':7s} {rep.numeric_verdict:11s} "
              f"{str(rep.closed_form_verdict):13s} y1 in [{lo:.6g}, {hi:.6g}]")
        span = hi - lo
        worst = 0.0
        for _ in range(20):
            y1 = lo + span * (1e-6 + (1.0 - 2e-6) * rng.random())
            worst = max(worst, vector_field_norm(p, line.point_at(y1)))
        print(f"{'':6s} residual over 20 sampled points: {worst:.3g}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    if not isinstance(cfg, SweepConfig):
        raise ConfigError("'sweep' expects a config with at least one axis key")
    files = run_sweep(cfg)
    text = files.pop("__csv__")
    if not files:
        sys.stdout.write(text)
    for name in sorted(files):
        print(f"wrote {files[name]}")
    return EXIT_OK


def _cmd_phase(args) -> int:
    cfg = _load(args)
    if isinstance(cfg, SweepConfig):
        raise ConfigError("'phase' expects a scenario config (no axis keys)")
    result = run_scenario(cfg)
    if any(tr.error is not None for tr in result.trajectories):
        return EXIT_NUMERICAL
    docs = export_phase_plot(result)
    outdir = Path(cfg.outputs) if cfg.outputs else Path(".")
    outdir.mkdir(parents=True, exist_ok=True)
    for name, text in docs.items():
        path = outdir / name
        path.write_text(text)
        print(f"wrote {path}")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "run": _cmd_run,
    "equilibria": _cmd_equilibria,
    "sweep": _cmd_sweep,
    "phase": _cmd_phase,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return _COMMANDS[args.command](args)
    except (ConfigError, InvalidParamsError, StateSpaceError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BivirusError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
