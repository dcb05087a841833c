"""Command-line interface: ``prcurve <subcommand> ...`` or ``python -m prcurve``.

Exit status
-----------
0 success, 1 a property check failed, 2 usage error, 3 unknown preset,
4 malformed config or CSV input, 5 grid value outside (0, 1],
6 operation not defined for the model (domain or unsupported).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import DEFAULT_EPSILON, condition_check, sigma_squared
from .distributions import distribution_from_config
from .empirical import eval_pr_hat, pr_hat_segments, pr_star, pr_zero
from .exceptions import (
    DegenerateLimitError,
    DomainError,
    NotApplicableError,
    UndefinedPrecisionError,
    UnsupportedOperationError,
)
from .io import InputFileError, curve_rows, dump_json, fmt, point_set_rows, read_scores_csv, write_rows
from .population import (
    ClassScoreModel,
    check_properties,
    curve_limits,
    default_grid,
    eval_pr,
    eval_roc,
    pr_lower_bound,
)
from .presets import PRESETS, get_preset
from .simulation import DEFAULT_GRID, DEFAULT_REPLICATES, MODES, SimulationConfig, run_simulation
from .svg import unit_square_plot

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_UNKNOWN_PRESET = 3
EXIT_BAD_INPUT = 4
EXIT_BAD_GRID = 5
EXIT_DOMAIN = 6

SEED_ENV = "PRCURVE_SEED"
SKEW_TOL = 1e-9


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# argument helpers


def parse_grid(text: str | None, default) -> np.ndarray:
    """Parse ``a:b:k`` (``k`` evenly spaced points) or a comma list of recalls."""
    if text is None:
        return np.asarray(default, dtype=float)
    try:
        if ":" in text:
            a, b, k = text.split(":")
            values = np.linspace(float(a), float(b), int(k))
        else:
            values = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise CliError(f"cannot parse grid {text!r}; use 'start:stop:count' or 'x1,x2,...'", EXIT_USAGE) from None
    if values.size == 0:
        raise CliError("grid is empty", EXIT_BAD_GRID)
    bad = values[~((values > 0.0) & (values <= 1.0))]
    if bad.size:
        raise CliError(f"grid value {bad[0]:g} lies outside (0, 1]", EXIT_BAD_GRID)
    return np.unique(values)


def _resolve_pi_plus(args) -> float | None:
    pi, skew = args.pi_plus, args.skew
    if skew is not None and not skew > 0:
        raise CliError("--skew must be positive", EXIT_USAGE)
    if pi is not None and not 0.0 < pi < 1.0:
        raise CliError("--pi-plus must lie in (0, 1)", EXIT_USAGE)
    if skew is not None:
        from_skew = 1.0 / (1.0 + skew)
        if pi is not None and abs(pi - from_skew) > SKEW_TOL:
            raise CliError(f"--pi-plus {pi} and --skew {skew} disagree (skew implies pi+ = {from_skew:.9g})", EXIT_USAGE)
        return from_skew
    return pi


def load_model(args) -> tuple[ClassScoreModel, str | None]:
    """Model from ``--preset`` or ``--config``; returns it with the expected PR shape, if known."""
    pi = _resolve_pi_plus(args)
    if args.preset is not None:
        try:
            preset = get_preset(args.preset)
        except KeyError as exc:
            raise CliError(exc.args[0], EXIT_UNKNOWN_PRESET) from None
        return preset.model(0.5 if pi is None else pi), preset.monotonicity
    path = Path(args.config)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", EXIT_BAD_INPUT) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}", EXIT_BAD_INPUT) from None
    try:
        plus = distribution_from_config(raw["plus"])
        minus = distribution_from_config(raw["minus"])
        if pi is None:
            pi = float(raw.get("pi_plus", 0.5))
        model = ClassScoreModel(plus, minus, pi)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: malformed model config: {exc}", EXIT_BAD_INPUT) from None
    return model, raw.get("monotonicity")


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _print_report(pairs) -> None:
    width = max(len(k) for k, _ in pairs)
    for k, v in pairs:
        if isinstance(v, float):
            v = "inf" if math.isinf(v) else f"{v:.6f}"
        print(f"{k.ljust(width)} = {v}")


# --------------------------------------------------------------------------
# subcommands


def cmd_cases(args) -> int:
    for p in PRESETS.values():
        print(f"{p.name:12s} {p.monotonicity:14s} {p.description}")
    return EXIT_OK


def cmd_population(args) -> int:
    model, _ = load_model(args)
    grid = parse_grid(args.grid, default_grid(999, include_one=True))
    inner = grid[grid < 1.0]
    roc = np.asarray(eval_roc(model, inner), dtype=float)
    pr = np.asarray(eval_pr(model, grid), dtype=float)
    limits = curve_limits(model)
    out = _out_dir(args)
    if out is not None:
        write_rows(out / "roc.csv", ("x", "y"), zip(inner, roc))
        write_rows(out / "pr.csv", ("x", "y"), zip(grid, pr))
        dump_json({"pi_plus": model.pi_plus, "limits": limits.to_dict()}, out / "limits.json")
    if args.svg:
        unit_square_plot(
            [("PR", grid, pr)],
            [("chance", grid, np.full(grid.shape, model.pi_plus)), ("lower bound", grid, pr_lower_bound(model.pi_plus, grid))],
            title="population PR curve", xlabel="recall", ylabel="precision", target=args.svg,
        )
    report = [("pi_plus", model.pi_plus)] + [
        (k, v if v is not None else "undefined") for k, v in limits.to_dict().items() if k != "k_estimate"
    ]
    report.append(("k_estimate", "undefined" if limits.k_estimate is None else limits.k_estimate))
    _print_report(report)
    return EXIT_OK


def cmd_empirical(args) -> int:
    sample = read_scores_csv(args.scores)
    curve = pr_hat_segments(sample)
    if args.grid is None:
        grid = np.unique(np.concatenate([np.arange(1, sample.n_plus + 1) / sample.n_plus, curve.breakpoints]))
        grid = grid[(grid > 0) & (grid <= 1)]
    else:
        grid = parse_grid(args.grid, None)
    values = np.atleast_1d(eval_pr_hat(sample, grid))
    out = _out_dir(args)
    if out is not None:
        write_rows(out / "pr_star.csv", ("t", "recall", "precision"), point_set_rows(pr_star(sample)))
        write_rows(out / "pr_zero.csv", ("t", "recall", "precision"), point_set_rows(pr_zero(sample)))
        write_rows(out / "pr_hat.csv", ("x", "pr_hat"), zip(grid, values))
        dump_json(
            {
                "n_plus": sample.n_plus,
                "n_minus": sample.n_minus,
                "pr_hat_at_1": curve.endpoint_value,
                "discontinuities": [
                    {"x": float(x), "left_limit": float(l), "value": float(v)}
                    for x, l, v in zip(curve.discontinuities, curve.left_limits, curve.values_at_discontinuities)
                ],
            },
            out / "pr_hat_structure.json",
        )
    if args.svg:
        fine = np.linspace(1e-6, 1.0, 2001)
        unit_square_plot(
            [("PR-hat", fine, eval_pr_hat(sample, fine))],
            [("chance", fine, np.full(fine.shape, sample.n_plus / sample.n))],
            title="empirical PR curve", xlabel="recall", ylabel="precision", target=args.svg,
        )
    _print_report([
        ("n_plus", sample.n_plus),
        ("n_minus", sample.n_minus),
        ("pr_hat_at_1", float(curve.endpoint_value)),
        ("discontinuities", len(curve.discontinuities)),
    ])
    if out is None:
        print("x,pr_hat")
        for x, v in zip(grid, values):
            print(f"{fmt(x)},{fmt(v)}")
    return EXIT_OK


def cmd_variance(args) -> int:
    model, _ = load_model(args)
    grid = parse_grid(args.grid, np.round(np.arange(1, 20) * 0.05, 10))
    rows = []
    for x in grid:
        if x >= 1.0:
            raise CliError("the variance formula needs x < 1", EXIT_BAD_GRID)
        prof = sigma_squared(model, float(x))
        rows.append((x, prof.pr, prof.alpha, prof.slope, prof.sigma2, prof.flag))
    report = condition_check(model, args.epsilon)
    out = _out_dir(args)
    if out is not None:
        write_rows(out / "variance.csv", ("x", "pr", "alpha", "slope", "sigma2", "flag"), rows)
        dump_json(report.to_dict(), out / "conditions.json")
    else:
        print("x,pr,alpha,slope,sigma2,flag")
        for r in rows:
            print(",".join(v if isinstance(v, str) else fmt(v) for v in r))
    _print_report([
        ("epsilon", report.epsilon),
        ("slope_sup", report.slope_sup),
        ("gamma_estimate", report.gamma_estimate),
    ] + [(k, "pass" if v else "FAIL") for k, v in report.verdicts().items()])
    return EXIT_OK


def cmd_simulate(args) -> int:
    model, _ = load_model(args)
    grid = parse_grid(args.grid, DEFAULT_GRID)
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise CliError(f"{SEED_ENV}={env!r} is not an integer", EXIT_USAGE) from None
    config = SimulationConfig(model, args.n, args.replicates, tuple(grid), seed, args.mode)
    result = run_simulation(config, workers=args.workers)
    out = _out_dir(args)
    if out is not None:
        result.write_csv(out / "simulation.csv")
        result.write_json(out / "summary.json")
    print(f"seed = {seed}, replicates = {config.replicates}, redraws = {result.redraws}, mean n+ = {result.n_plus.mean():.4f}")
    print("x,mean,sd,ks,flag,bimodal")
    for s in result.summaries:
        print(f"{fmt(s.x)},{fmt(s.mean)},{fmt(s.sd)},{fmt(s.ks)},{s.flag},{str(s.bimodal).lower()}")
    return EXIT_OK


def cmd_check(args) -> int:
    model, expected = load_model(args)
    verdicts = check_properties(model, args.resolution, expected)
    width = max(len(v.name) for v in verdicts)
    for v in verdicts:
        print(f"{v.name.ljust(width)}  {v.status:4s}  {v.detail}")
    return EXIT_CHECK_FAILED if any(v.passed is False for v in verdicts) else EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_model_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="built-in model name (see the 'cases' subcommand)")
    src.add_argument("--config", help="JSON model file with 'plus', 'minus' and optional 'pi_plus'")
    p.add_argument("--pi-plus", type=float, help="positive-class prior pi+ in (0, 1); default 0.5")
    p.add_argument("--skew", type=float, help="class ratio pi-/pi+; alternative to --pi-plus")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prcurve", description="Population and empirical precision-recall curves.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    grid_help = "recall grid as 'start:stop:count' or 'x1,x2,...'; values must lie in (0, 1]"

    p = sub.add_parser("cases", help="list built-in models")
    p.set_defaults(func=cmd_cases)

    p = sub.add_parser("population", help="population ROC/PR curves and their endpoint limits")
    _add_model_args(p)
    p.add_argument("--grid", help=grid_help)
    p.add_argument("--out", help="directory for roc.csv, pr.csv and limits.json")
    p.add_argument("--svg", help="write a PR plot to this SVG file")
    p.set_defaults(func=cmd_population)

    p = sub.add_parser("empirical", help="PR*, PR0 and PR-hat from a label,score CSV")
    p.add_argument("--scores", required=True, help="CSV with header 'label,score'")
    p.add_argument("--grid", help=grid_help + "; default: all recall levels k/n+ and breakpoints")
    p.add_argument("--out", help="directory for pr_star.csv, pr_zero.csv, pr_hat.csv and pr_hat_structure.json")
    p.add_argument("--svg", help="write a PR-hat plot to this SVG file")
    p.set_defaults(func=cmd_empirical)

    p = sub.add_parser("variance", help="asymptotic variance profile and regularity diagnostics")
    _add_model_args(p)
    p.add_argument("--grid", help=grid_help + " (x = 1 excluded); default 0.05, 0.10, ..., 0.95")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON, help="diagnostics use [eps, 1 - eps]")
    p.add_argument("--out", help="directory for variance.csv and conditions.json")
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("simulate", help="Monte Carlo replicates of PR-hat on a recall grid")
    _add_model_args(p)
    p.add_argument("--n", type=int, required=True, help="sample size per replicate")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES, help="number of replicates (default %(default)s)")
    p.add_argument("--grid", help=grid_help + "; default 0.1, 0.2, ..., 1.0")
    p.add_argument("--seed", type=int, help=f"master seed; default ${SEED_ENV} or 0")
    p.add_argument("--mode", choices=MODES, default="binomial", help="class-count mode (default %(default)s)")
    p.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on it")
    p.add_argument("--out", help="directory for simulation.csv and summary.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="verify the structural curve properties for a model")
    _add_model_args(p)
    p.add_argument("--resolution", type=int, default=2000, help="grid points (default %(default)s)")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"prcurve: error: {exc}", file=sys.stderr)
        return exc.code
    except InputFileError as exc:
        print(f"prcurve: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"prcurve: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (
        DomainError,
        UnsupportedOperationError,
        NotApplicableError,
        UndefinedPrecisionError,
        DegenerateLimitError,
    ) as exc:
        print(f"prcurve: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
