"""Command-line experiment runner.

Each subcommand writes one CSV (plus a gnuplot-friendly ``.dat`` copy) and
a ``manifest.json`` into ``--out``. Exit status: 0 success, 2 usage error,
3 numerical failure, 4 nothing resolved.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from .core import FEConfig
from .diagnostics import EvalGrid, diagnose
from .errors import FEError, InsufficientDataError, NotResolvedError, NumericalError
from .functions import RESOLUTION_OMEGA, test_function
from .io import ExperimentConfig, write_columns, write_csv, write_manifest
from .solvers import SolverSpec, available_solvers
from .study import (
    DataSpec,
    budgeted_error,
    en_estimate,
    fit_nu,
    fit_tau,
    resolution,
    theta_curve,
)
from .study import run_jobs

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_UNRESOLVED = 0, 2, 3, 4
DATA_CHOICES = ("equispaced", "jittered", "logarithmic", "fourier", "mapped-cheb")


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_m_range(text: str):
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            if step <= 0:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --m-range {text!r}; use start:stop:step or a list") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fe-study", description="Fourier extension parameter studies.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--T", type=_floats, default=[2.0], help="extension parameters, comma list")
    common.add_argument("--eta", type=_floats, default=[], help="oversampling factors M/N")
    common.add_argument("--kappa-star", type=_floats, default=[], help="stability budgets")
    common.add_argument("--epsilon", type=float, default=1e-13, help="SVD truncation threshold")
    common.add_argument("--grid-k", type=int, default=2**15, help="evaluation grid parameter K")
    common.add_argument("--m-range", type=parse_m_range, default=None,
                        help="M values (N values for en-curve), start:stop:step or list")
    common.add_argument("--data", choices=DATA_CHOICES, default="equispaced")
    common.add_argument("--delta-jit", type=float, default=0.5)
    common.add_argument("--log-c", type=float, default=2.0)
    common.add_argument("--function", type=_ints, default=[], help="test function ids 1..9")
    common.add_argument("--omega", type=_floats, default=[], help="frequencies for resolution")
    common.add_argument("--delta-res", type=float, default=1e-3)
    common.add_argument("--solver", choices=available_solvers(), default="truncated_svd")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=".")
    helps = {
        "diagnostics": "kappa, lambda and mu per (T, eta, M)",
        "theta": "Theta(M; kappa*) curves with nu and tau fits",
        "approx": "sup errors of test-function approximations",
        "resolution": "resolution power R(omega) and the constant r",
        "en-curve": "best-approximation surrogate E_N(f) against N",
    }
    for name, h in helps.items():
        sub.add_parser(name, parents=[common], help=h, description=h)
    return p


def config_from_args(args) -> ExperimentConfig:
    M = args.m_range
    if M is None:
        defaults = {"theta": range(300, 1001, 100), "resolution": range(300, 4001, 100)}
        M = list(defaults.get(args.command, []))
    return ExperimentConfig(
        command=args.command, T=args.T, eta=args.eta, kappa_star=args.kappa_star,
        epsilon=args.epsilon, K=args.grid_k, M=M, data=args.data, delta_jit=args.delta_jit,
        log_c=args.log_c, function=args.function, omega=args.omega, delta_res=args.delta_res,
        solver=args.solver, jobs=args.jobs, out=args.out)


def _require(cond, field, msg):
    if not cond:
        raise UsageError(f"--{field}: {msg}")


def _validate(cfg: ExperimentConfig):
    _require(cfg.T and all(t > 1 for t in cfg.T), "T", "need values > 1")
    _require(0 < cfg.epsilon < 1, "epsilon", "must lie in (0, 1)")
    _require(cfg.K >= 1, "grid-k", "must be positive")
    _require(cfg.jobs >= 1, "jobs", "must be positive")
    _require(all(e >= 1 for e in cfg.eta), "eta", "values must be >= 1")
    _require(all(k > 1 for k in cfg.kappa_star), "kappa-star", "values must exceed 1")
    _require(all(m >= 1 for m in cfg.M), "m-range", "values must be positive")
    _require(0 < cfg.delta_res < 1, "delta-res", "must lie in (0, 1)")
    for i in cfg.function:
        _require(1 <= i <= 9, "function", f"unknown test function id {i}")


def _data(cfg) -> DataSpec:
    return DataSpec(cfg.data, cfg.delta_jit, cfg.log_c)


def _solver(cfg) -> SolverSpec:
    return SolverSpec(cfg.solver, cfg.epsilon)


# -- jobs (module level so worker processes can pickle them) ---------------

def _diag_job(T, eta, M, cfg):
    N = int(math.floor(M / eta + 1e-12))
    config = FEConfig(T, N, M, cfg.epsilon)
    nodes = _data(cfg).sample_set(M, T)
    rec = diagnose(config, nodes, _solver(cfg), EvalGrid(cfg.K, T))
    row = rec.row()
    row.update(data=cfg.data, kappa_over_logM=rec.kappa / math.log(M), lambda_over_M=rec.lam / M)
    return row


def _theta_job(T, kappa_star, cfg):
    return theta_curve(T, cfg.M, kappa_star, _solver(cfg), _data(cfg), cfg.K)


def _approx_job(fid, T, kappa_star, eta, M, cfg):
    N = None if eta is None else int(math.floor(M / eta + 1e-12))
    p = budgeted_error(test_function(fid), T, M, kappa_star, _solver(cfg), _data(cfg),
                       cfg.K, cfg.K, N=N, name=str(fid))
    return {"function": fid, "T": T, "kappa_star": kappa_star, "eta": eta, "M": M, "N": p.N,
            "error": p.error}


def _resolution_job(T, eta, omega, cfg):
    row = {"T": T, "eta": eta, "omega": omega, "resolved": True}
    try:
        R = resolution(omega, cfg.delta_res, T, eta, _solver(cfg), M_max=max(cfg.M), error_K=cfg.K)
    except NotResolvedError as exc:
        row.update(resolved=False, R=None, R_over_omega=None, best_error=exc.best_error)
        return row
    row.update(R=R, R_over_omega=R / omega, best_error=None)
    return row


def _en_job(fid, T, N, cfg):
    err, norm = en_estimate(test_function(fid), N, T, cfg.epsilon)
    return {"function": fid, "T": T, "N": N, "error": err, "coeff_norm": norm}


# -- commands --------------------------------------------------------------

def _emit(cfg, name, header, rows, results=None):
    os.makedirs(cfg.out, exist_ok=True)
    write_csv(os.path.join(cfg.out, name + ".csv"), header, rows)
    write_columns(os.path.join(cfg.out, name + ".dat"), header, rows)
    outputs = [name + ".csv", name + ".dat"]
    if results is not None:
        with open(os.path.join(cfg.out, name + ".json"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(results, indent=2, sort_keys=True) + "\n")
        outputs.append(name + ".json")
    write_manifest(cfg, cfg.out, outputs)


DIAG_HEADER = ("T", "N", "M", "eta", "epsilon", "solver_id", "K", "kappa", "lambda", "mu", "norm",
               "data", "kappa_over_logM", "lambda_over_M")


def cmd_diagnostics(cfg: ExperimentConfig) -> int:
    _require(cfg.M, "m-range", "empty M list")
    _require(cfg.eta, "eta", "empty eta list")
    jobs = [(T, e, M, cfg) for T in cfg.T for e in cfg.eta for M in cfg.M]
    rows = run_jobs(_diag_job, jobs, cfg.jobs)
    _emit(cfg, "diagnostics", DIAG_HEADER, rows)
    return EXIT_OK


def cmd_theta(cfg: ExperimentConfig) -> int:
    _require(cfg.M and min(cfg.M) >= 2, "m-range", "need M values >= 2")
    _require(cfg.kappa_star, "kappa-star", "empty kappa* list")
    pairs = [(T, k) for k in cfg.kappa_star for T in cfg.T]
    curves = run_jobs(_theta_job, [(T, k, cfg) for T, k in pairs], cfg.jobs)
    rows, nu = [], {}
    for (T, k), c in zip(pairs, curves):
        for p in c.points:
            rows.append({"T": T, "kappa_star": k, "M": p.M, "Theta": p.value,
                         "Theta_over_S": p.value / c.scale(p.M), "saturated": p.saturated,
                         "degenerate": p.degenerate})
        fit = fit_nu(c, (300, math.inf) if sum(m >= 300 for m in c.Ms) >= 4 else (-math.inf, math.inf))
        sat = all(p.saturated for p in c.points if fit.fit_range[0] <= p.M)
        nu.setdefault(repr(k), []).append({"T": T, "nu": fit.slope, "intercept": fit.intercept,
                                           "residual_rms": fit.residual_rms, "saturated": sat})
    results = {}
    for k, entries in nu.items():
        try:
            tau = fit_tau([(e["T"], e["nu"]) for e in entries], {e["T"] for e in entries if e["saturated"]})
        except InsufficientDataError:
            tau = None
        results[k] = {"nu": entries, "tau": tau}
    _emit(cfg, "theta", ("T", "kappa_star", "M", "Theta", "Theta_over_S", "saturated", "degenerate"),
          rows, results)
    return EXIT_OK


def cmd_approx(cfg: ExperimentConfig) -> int:
    _require(cfg.function, "function", "need at least one function id")
    _require(cfg.M, "m-range", "empty M list")
    _require(cfg.kappa_star or cfg.eta, "kappa-star", "give --kappa-star or --eta")
    budgets = [(k, None) for k in cfg.kappa_star] + [(None, e) for e in cfg.eta]
    jobs = [(f, T, k, e, M, cfg) for f in cfg.function for T in cfg.T for k, e in budgets for M in cfg.M]
    rows = run_jobs(_approx_job, jobs, cfg.jobs)
    _emit(cfg, "errors", ("function", "T", "kappa_star", "eta", "M", "N", "error"), rows)
    return EXIT_OK


def cmd_resolution(cfg: ExperimentConfig) -> int:
    omegas = cfg.omega or (RESOLUTION_OMEGA,)
    _require(list(omegas) == sorted(omegas) and omegas[0] > 0, "omega", "need increasing positive values")
    _require(cfg.M, "m-range", "need M_max (largest --m-range value)")
    _require(cfg.eta or cfg.kappa_star, "eta", "give --eta or --kappa-star")
    pairs = [(T, e, None) for T in cfg.T for e in cfg.eta]
    if cfg.kappa_star:
        # eta = 1/nu from the Theta regression over the M range
        # M values in [300, 1000] drive the fit; the largest M caps the search
        Ms = tuple(m for m in cfg.M if 300 <= m <= 1000) or cfg.M
        tcfg = replace(cfg, command="theta", M=Ms)
        tp = [(T, k) for k in cfg.kappa_star for T in cfg.T]
        curves = run_jobs(_theta_job, [(T, k, tcfg) for T, k in tp], cfg.jobs)
        pairs += [(T, 1.0 / fit_nu(c, (-math.inf, math.inf)).slope, k) for (T, k), c in zip(tp, curves)]
    jobs = [(T, e, w, cfg) for T, e, _ in pairs for w in omegas]
    rows = run_jobs(_resolution_job, jobs, cfg.jobs)
    it = iter(rows)
    results = []
    for T, e, k in pairs:
        group = [next(it) for _ in omegas]
        for r in group:
            r["kappa_star"] = k
        ratios = [r["R_over_omega"] for r in group if r["resolved"]]
        results.append({"T": T, "eta": e, "kappa_star": k,
                        "r": float(np.mean(ratios[-3:])) if ratios else None})
    _emit(cfg, "resolution", ("T", "eta", "kappa_star", "omega", "R", "R_over_omega", "resolved",
                              "best_error"), rows, {"fits": results})
    if not any(r["resolved"] for r in rows):
        print("no omega was resolved within M_max", file=sys.stderr)
        return EXIT_UNRESOLVED
    return EXIT_OK


def cmd_en_curve(cfg: ExperimentConfig) -> int:
    _require(cfg.function, "function", "need at least one function id")
    _require(cfg.M, "m-range", "empty N list")
    jobs = [(f, T, N, cfg) for f in cfg.function for T in cfg.T for N in cfg.M]
    rows = run_jobs(_en_job, jobs, cfg.jobs)
    _emit(cfg, "en_curve", ("function", "T", "N", "error", "coeff_norm"), rows)
    return EXIT_OK


COMMAND_TABLE = {
    "diagnostics": cmd_diagnostics,
    "theta": cmd_theta,
    "approx": cmd_approx,
    "resolution": cmd_resolution,
    "en-curve": cmd_en_curve,
}


def run(cfg: ExperimentConfig) -> int:
    """Run a configured experiment and return the exit status."""
    try:
        _validate(cfg)
        return COMMAND_TABLE[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InsufficientDataError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotResolvedError as exc:
        print(f"not resolved: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except FEError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
