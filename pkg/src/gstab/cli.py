"""Command-line front end: ``gstab {check,simulate,find-lambda,validate} CONFIG``.

Exit status: 0 when every requested check passes on its samples, 1 when a
check is violated (or not passed for another reason) or no feasible level
exists, 2 for usage and configuration errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .checker import (
    CheckReport,
    Verdict,
    check_connected,
    check_global,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    find_largest_lambda,
    write_witness_csv,
)
from .config import RunConfig, load_config
from .exceptions import ConfigError, DimensionMismatch, GStabError, NoFeasibleLambda
from .gfunctions import validate_gfunction
from .numerics import Ball, as_state, sample_region, xr_to_json
from .reporting import write_json
from .systems import simulate, write_trajectory_csv

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _say(msg):
    print(msg, flush=True)


def _default_bracket(cfg: RunConfig, g, sys_, win):
    """``[zeta_m or lambda_floor, max sampled g]`` unless the config gives one."""
    b = cfg.check.get("bracket")
    floor = cfg.check.get("lambda_floor", -30.0)
    if b is not None:
        lo = -math.inf if b[0] == "-inf" else b[0]
        return lo, b[1], floor
    lo = float(g.zeta_m) if g.zeta_m.is_finite else floor
    box = win if win is not None else sys_.domain.bounding_box()
    if box is None:
        raise ConfigError("check.bracket", "the domain is unbounded; give check.bracket or check.window")
    vals = g.evaluate(sample_region(box, cfg.sampling))
    hi = float(np.max(vals[np.isfinite(vals)]))
    if not hi > lo:
        raise ConfigError("check.bracket", "could not derive a bracket from the window; give one")
    return lo, hi, floor


def _search(cfg, g, sys_):
    win = cfg.window()
    lo, hi, floor = _default_bracket(cfg, g, sys_, win)
    return find_largest_lambda(g, sys_, lo, hi, cfg.sampling, iters=cfg.check.get("iterations", 30),
                               window=win, floor=floor)


def _write_check(cfg, out, report: CheckReport, name="check_report"):
    if "json" in cfg.formats:
        payload = report.to_dict()
        payload["run_config"] = cfg.to_dict()
        write_json(out / f"{name}.json", payload)
    if "csv" in cfg.formats and report.violations:
        write_witness_csv(report, out / ("witnesses.csv" if name == "check_report" else f"{name}_witnesses.csv"))


def cmd_check(cfg: RunConfig, out: Path) -> int:
    sys_ = cfg.build_system()
    g = cfg.build_gfunction()
    ok = True
    if cfg.check.get("windows"):
        rep = check_global(g, sys_, cfg.windows(), cfg.sampling)
        _write_check(cfg, out, rep)
        _say(f"global check over {len(cfg.windows())} window(s): {rep.verdict.value} "
             f"({rep.samples_tested} samples, {rep.violation_count} violation(s))")
        return EXIT_PASS if rep.passed else EXIT_FAIL

    lam = cfg.check.get("lambda")
    if lam is None:
        raise ConfigError("check.lambda", "missing (a number or \"auto\"); or give check.windows")
    if lam == "auto":
        lam = _search(cfg, g, sys_).value
        _say(f"lambda (auto) = {lam!r}")
    win = cfg.window()
    rep = check_theorem1(g, sys_, lam, cfg.sampling, window=win)
    if cfg.check.get("connected"):
        box = win if win is not None else sys_.domain.bounding_box().scaled(1.5)
        conn = check_connected(g, lam, box)
        rep.details["connected"] = conn
        ok &= conn
        _say(f"sub-level set connected: {conn}")
    _write_check(cfg, out, rep)
    _say(f"decrease check at lambda={lam!r}: {rep.verdict.value} "
         f"({rep.samples_tested} samples, margin_max={rep.margin_max!r})")
    ok &= rep.passed

    if cfg.check.get("theorem2"):
        fit = check_theorem2(g, sys_, lam, cfg.sampling, window=win)
        if "json" in cfg.formats:
            write_json(out / "theorem2_fit.json", fit.to_dict())
        _say(f"class-K minorant valid: {fit.valid}")
        ok &= fit.valid
    if cfg.check.get("theorem3_window") is not None:
        rep3 = check_theorem3(g, sys_, lam, cfg.window("theorem3_window"), cfg.sampling)
        _write_check(cfg, out, rep3, "theorem3_report")
        _say(f"non-decrease outside G_lambda: {rep3.verdict.value} ({rep3.samples_tested} samples)")
        ok &= rep3.passed
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_simulate(cfg: RunConfig, out: Path, x0=None) -> int:
    sys_ = cfg.build_system()
    g = cfg.build_gfunction()
    x0 = x0 if x0 is not None else cfg.simulation.x0
    if x0 is None:
        raise ConfigError("simulation.x0", "missing; give --x0 or simulation.x0")
    try:
        x0 = as_state(x0, sys_.dim)
    except (DimensionMismatch, ValueError) as exc:
        raise ConfigError("simulation.x0", str(exc)) from None
    s = cfg.simulation
    rec = simulate(sys_, x0, s.max_steps, s.conv_tol, s.div_bound, g, s.conv_persist)
    write_trajectory_csv(rec, out / "trajectory.csv")
    _say(f"x0={x0.tolist()}: {rec.classification} after {rec.states.shape[0] - 1} step(s)")
    return EXIT_PASS


def cmd_find_lambda(cfg: RunConfig, out: Path) -> int:
    sys_ = cfg.build_system()
    g = cfg.build_gfunction()
    try:
        res = _search(cfg, g, sys_)
    except NoFeasibleLambda as exc:
        payload = {"kind": "lambda_search", "lambda": None, "error": str(exc), "run_config": cfg.to_dict()}
        write_json(out / "lambda_report.json", payload)
        _say(f"no feasible lambda: {exc}")
        return EXIT_FAIL
    payload = res.to_dict()
    payload["run_config"] = cfg.to_dict()
    write_json(out / "lambda_report.json", payload)
    _say(f"lambda = {res.value!r}  bracket = [{res.bracket[0]!r}, {res.bracket[1]!r}]  "
         f"iterations = {res.iterations}")
    for note in res.notes:
        _say(f"note: {note}")
    return EXIT_PASS


def cmd_validate(cfg: RunConfig, out: Path) -> int:
    g = cfg.build_gfunction()
    win = cfg.window() or Ball(2.0, g.dim)
    rep = validate_gfunction(g, win, cfg.sampling)
    payload = rep.to_dict()
    payload["run_config"] = cfg.to_dict()
    write_json(out / "validation_report.json", payload)
    for i, c in enumerate(rep.conditions(), 1):
        line = f"condition {i}: {'pass_on_samples' if c.passed else 'violated'}"
        if not c.passed:
            line += f" at {list(c.witness) if c.witness else '?'}: {c.detail}"
        _say(line)
    return EXIT_PASS if rep.overall else EXIT_FAIL


COMMANDS = {"check": cmd_check, "simulate": cmd_simulate, "find-lambda": cmd_find_lambda,
            "validate": cmd_validate}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gstab", description="Sampling checks of G-function stability certificates.")
    p.add_argument("--version", action="version", version=f"gstab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("check", "run the decrease check (and optional extras) for a system and G-function"),
                        ("simulate", "iterate the system and write trajectory.csv"),
                        ("find-lambda", "bisect for the largest certified level"),
                        ("validate", "check the defining conditions of a G-function")]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("config", help="JSON run configuration")
        sp.add_argument("--out", help="output directory (overrides output.directory)")
        if name == "simulate":
            sp.add_argument("--x0", type=float, nargs="+", help="initial state (overrides simulation.x0)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        cfg = load_config(args.config)
        out = Path(args.out or cfg.output_dir)
        if args.command == "simulate":
            return cmd_simulate(cfg, out, args.x0)
        return COMMANDS[args.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GStabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
