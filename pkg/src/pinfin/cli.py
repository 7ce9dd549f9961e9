"""Command-line entry points.

Subcommands
-----------
solve     : solve the temperature equation for the configured radius profile;
            writes temperature.csv, profile.csv and flux_report.json.
optimize  : maximize the relaxed flux for a single cap (or uncapped); writes
            b_opt.csv, a_opt.csv, T_opt.csv, objective_trace.csv and
            structure_report.json.
sweep     : one optimization per cap in the configured M list (plus an
            uncapped run when requested); per-cap files and sweep_summary.json.
verify    : run the verification suite and write verify_report.json.
sequence  : emit oscillating / bang profiles without solving.

Exit codes: 0 success, 1 configuration error, 2 verification failure,
3 numerical failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config
from .errors import ConfigError, NumericalError
from .functionals import flux_report, surface_supremum
from .io import format_float, write_json, write_table
from .optimizer import OptimConfig, OptimResult, optimize, verify_bang_structure
from .profiles import SurfaceMeasure, check_surface_bound
from .sequences import bang_density, switch_point
from .solver import solve_temperature
from .verification import default_config, run_verification


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pinfin",
                                description="Axisymmetric fin model and shape optimizer")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("solve", "optimize", "sweep", "verify", "sequence"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path,
                        required=name not in ("verify",),
                        help="YAML experiment configuration")
        sp.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory (created if missing)")
        sp.add_argument("--n-cells", type=int, default=None,
                        help="override numerics.n_cells")
        sp.add_argument("--format", choices=("csv", "json"), default=None,
                        help="override output.format for tabular files")
        sp.add_argument("--seed", type=int, default=None,
                        help="seed for randomized verification profiles")
    return p


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else default_config()
    if args.n_cells is not None:
        cfg.n_cells = int(args.n_cells)
    if args.format is not None:
        cfg.out_format = args.format
    if args.seed is not None:
        cfg.seed = int(args.seed)
    return cfg


def _surface_budget(cfg: ExperimentConfig) -> float:
    if cfg.constraint_kind != "surface" or cfg.S0 is None:
        raise ConfigError("this command needs constraint.kind=surface with a budget S0")
    return cfg.S0


def cmd_solve(cfg: ExperimentConfig, out: Path) -> int:
    grid = cfg.grid()
    params = cfg.params()
    if cfg.profile_kind == "oscillating":
        a, b = cfg.oscillating_pair(grid)   # sampled radius, exact density
    else:
        a = cfg.radius_profile(grid)
        b = SurfaceMeasure.from_radius(a, grid)
    if cfg.S0 is not None:
        check_surface_bound(a, cfg.S0)
    T = solve_temperature(a, b, params, grid)
    rep = flux_report(a, b, params, grid, T)
    fmt = cfg.out_format
    write_table(out / "temperature.csv", ["x_m", "T_C"],
                [grid.nodes, T.values], fmt=fmt)
    write_table(out / "profile.csv", ["x_m", "a_m", "b_m"],
                [grid.nodes, a.values, b.density],
                comment="b_m is the cell density on [x_i, x_{i+1}); "
                        "last row padded with nan", fmt=fmt)
    write_json(out / "flux_report.json", {
        "F_boundary_W": rep.boundary,
        "F_integral_W": rep.integral,
        "relative_gap": rep.relative_gap,
    })
    return 0


def _optim_config(cfg: ExperimentConfig, M: float | None, grid) -> OptimConfig:
    return OptimConfig(a0=cfg.a0, S0=_surface_budget(cfg), M=M, grid=grid,
                       params=cfg.params(), max_iters=cfg.max_iters)


def _write_optim(cfg: ExperimentConfig, oc: OptimConfig, res: OptimResult,
                 out: Path, suffix: str = "") -> dict:
    grid = oc.grid
    fmt = cfg.out_format
    write_table(out / f"b_opt{suffix}.csv", ["x_mid_m", "b_m"],
                [grid.midpoints, res.b_opt.density], fmt=fmt)
    if res.a_opt is not None:
        write_table(out / f"a_opt{suffix}.csv", ["x_m", "a_m"],
                    [grid.nodes, res.a_opt.values], fmt=fmt)
    write_table(out / f"T_opt{suffix}.csv", ["x_m", "T_C"],
                [grid.nodes, res.temperature], fmt=fmt)
    write_table(out / f"objective_trace{suffix}.csv", ["iteration", "objective_W"],
                [np.arange(res.trace.size, dtype=float), res.trace], fmt=fmt)
    report = {
        "objective_W": res.objective,
        "converged": bool(res.converged),
        "iterations": int(res.n_iterations),
        "budget_active": bool(res.budget_active),
        "cells_between_bounds": int(np.sum(res.active_set == "free")),
        "cap_M_m": oc.M,
    }
    exc = (res.b_opt.density - oc.a0) * grid.dx
    total_exc = float(exc.sum())
    if total_exc > 0:
        xm = grid.midpoints
        report["excess_fraction_first_5pct"] = float(
            exc[xm <= 0.05 * grid.length].sum() / total_exc)
        if cfg.h_profile.kind == "step":
            near = np.abs(xm - cfg.h_profile.x_step) <= 0.05 * grid.length
            report["excess_fraction_near_step"] = float(exc[near].sum() / total_exc)
    if oc.M is not None:
        bang = verify_bang_structure(res, oc)
        report.update({
            "switch_measured_m": bang.switch_measured,
            "switch_expected_m": bang.switch_expected,
            "switch_error_cells": bang.switch_error_cells,
            "bang_objective_W": bang.bang_objective,
            "objective_relative_gap": bang.objective_relative_gap,
        })
    write_json(out / f"structure_report{suffix}.json", report)
    return report


def cmd_optimize(cfg: ExperimentConfig, out: Path) -> int:
    grid = cfg.grid()
    M = None if cfg.drop_cap else (cfg.M if cfg.M is not None else
                                   (max(cfg.M_list) if cfg.M_list else None))
    if M is None and not cfg.drop_cap:
        raise ConfigError("constraint: need M_mm / M_list_mm, or drop_cap: true")
    oc = _optim_config(cfg, M, grid)
    res = optimize(oc)
    _write_optim(cfg, oc, res, out)
    return 0


def cmd_sweep(cfg: ExperimentConfig, out: Path) -> int:
    if not cfg.M_list:
        raise ConfigError("constraint.M_list_mm is required for sweep")
    grid = cfg.grid()
    caps = sorted(cfg.M_list)
    summaries = []
    prev = -np.inf
    for M in caps + ([None] if cfg.drop_cap else []):
        oc = _optim_config(cfg, M, grid)
        res = optimize(oc)
        tag = "_uncapped" if M is None else "_M%gmm" % (M * 1e3)
        rep = _write_optim(cfg, oc, res, out, suffix=tag)
        rep["nondecreasing_vs_previous"] = bool(res.objective >= prev - 1e-12)
        prev = res.objective
        summaries.append(rep)
    summary = {"runs": summaries}
    if cfg.h_profile.is_constant and cfg.S0 is not None:
        summary["surface_supremum_W"] = surface_supremum(
            cfg.a0, cfg.length, cfg.S0, cfg.params())
    write_json(out / "sweep_summary.json", summary)
    return 0


def cmd_sequence(cfg: ExperimentConfig, out: Path) -> int:
    grid = cfg.grid()
    fmt = cfg.out_format
    if cfg.profile_kind == "oscillating":
        a, b = cfg.oscillating_pair(grid)
        write_table(out / "profile.csv", ["x_m", "a_m", "b_m"],
                    [grid.nodes, a.values, b.density],
                    comment="oscillating profile with its exact step density",
                    fmt=fmt)
        return 0
    if cfg.M is not None or cfg.M_list:
        M = cfg.M if cfg.M is not None else max(cfg.M_list)
        S0 = _surface_budget(cfg)
        b = bang_density(M, S0, cfg.a0, grid)
        write_table(out / "bang_density.csv", ["x_mid_m", "b_m"],
                    [grid.midpoints, b.density],
                    comment=f"switch at x={format_float(switch_point(M, S0, cfg.a0, grid.length))} m",
                    fmt=fmt)
        return 0
    raise ConfigError("sequence: need profile.kind=oscillating or a cap M")


def cmd_verify(cfg: ExperimentConfig, out: Path) -> int:
    report = run_verification(cfg, seed=cfg.seed)
    write_json(out / "verify_report.json", report)
    for item in report["items"]:
        status = "SKIP" if item["skipped"] else ("PASS" if item["passed"] else "FAIL")
        print(f"[{status}] {item['name']}: {item['detail']}")
    if not report["all_passed"]:
        print("verification FAILED")
        return 2
    print("verification passed")
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _load(args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        handler = {
            "solve": cmd_solve,
            "optimize": cmd_optimize,
            "sweep": cmd_sweep,
            "sequence": cmd_sequence,
            "verify": cmd_verify,
        }[args.command]
        return handler(cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
