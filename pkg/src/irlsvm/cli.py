"""Command-line surface: fit, predict, simulate, sweep, and check.

Exit codes: 0 success, 2 usage error, 3 data error, 4 solver error,
5 invariant violation (from check).
"""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .core import Loss, Penalty, RiskSpec, build_design_matrix, predict_batch
from .data_io import (
    DataError,
    generate_gaussian_mixture,
    load_dataset_csv,
    load_feature_rows_csv,
    read_model,
    write_dataset_csv,
    write_model,
    write_trajectory_csv,
)
from .engine import (
    FitError,
    FitOptions,
    Init,
    fit,
    irls_step,
    majorizer_objective,
    monitor_kind,
    monitored_risk,
)
from .linalg import SingularSystemError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_SOLVER = 4
EXIT_INVARIANT = 5

DESCENT_SLACK = 1e-10
ANCHOR_SLACK = 1e-10
SURROGATE_SLACK = 1e-12

DEFAULT_SIM_N = 10_000
DEFAULT_SEED = 2017


def _nonneg(flag):
    def convert(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} must be a number") from None
        if value < 0:
            raise argparse.ArgumentTypeError(f"{flag} must be >= 0")
        return value

    return convert


def _positive(flag):
    def convert(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} must be a number") from None
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{flag} must be > 0")
        return value

    return convert


def _grid(text):
    """Inclusive start:step:end grid; a bare number is a single-point grid."""
    try:
        parts = [float(p) for p in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid {text!r} is not numeric") from None
    if len(parts) == 1:
        values = parts
    elif len(parts) == 3:
        start, step, end = parts
        if step == 0:
            if end != start:
                raise argparse.ArgumentTypeError("grid step is 0 but end differs from start")
            values = [start]
        else:
            count = (end - start) / step
            rounded = round(count)
            if rounded < 0 or abs(count - rounded) > 1e-9 * max(1.0, abs(count)):
                raise argparse.ArgumentTypeError(f"grid end {end} is not start + k*step")
            values = [start + i * step for i in range(rounded + 1)]
    else:
        raise argparse.ArgumentTypeError("grid must be start:step:end")
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("grid values must be >= 0")
    return values


def _add_risk_flags(parser):
    parser.add_argument("--loss", required=True, choices=[l.value for l in Loss])
    parser.add_argument("--penalty", required=True, choices=[p.value for p in Penalty])
    parser.add_argument("--lambda", dest="lam", type=_nonneg("lambda"), default=0.0, help="2-norm penalty constant")
    parser.add_argument("--mu", type=_nonneg("mu"), default=0.0, help="1-norm penalty constant")
    parser.add_argument("--epsilon", type=_positive("epsilon"), default=1e-6, help="smoothing constant")


def _add_fit_flags(parser):
    parser.add_argument("--iterations", type=int, default=50, help="maximum update count (default 50)")
    parser.add_argument(
        "--tolerance",
        type=_nonneg("tolerance"),
        default=1e-8,
        help="relative monitored-risk change that stops early; 0 runs all iterations",
    )
    parser.add_argument("--init", choices=[i.value for i in Init], default=Init.WARM_START_LS_L2.value)


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="irlsvm",
        description="Train linear SVMs with reweighted-least-squares updates derived from quadratic surrogates.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_fit = sub.add_parser("fit", help="train one loss/penalty combination on a CSV dataset")
    _add_risk_flags(p_fit)
    _add_fit_flags(p_fit)
    p_fit.add_argument("--data", required=True, help="labeled dataset CSV (label column 'y')")
    p_fit.add_argument("--out", required=True, help="model file path; a .trajectory.csv lands next to it")
    p_fit.set_defaults(handler=_cmd_fit)

    p_pred = sub.add_parser("predict", help="append a predicted-label column to a CSV")
    p_pred.add_argument("--model", required=True, help="model file written by fit")
    p_pred.add_argument("--data", required=True, help="feature CSV; a 'y' column, if present, is ignored")
    p_pred.add_argument("--out", required=True, help="output CSV path")
    p_pred.set_defaults(handler=_cmd_predict)

    p_sim = sub.add_parser("simulate", help="generate the two-Gaussian benchmark dataset")
    p_sim.add_argument("--n", type=int, default=DEFAULT_SIM_N, help="sample count, even (default 10000)")
    p_sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sim.add_argument("--out", required=True, help="dataset CSV path")
    p_sim.set_defaults(handler=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="fit across a penalty-constant grid and export the run data")
    _add_risk_flags(p_sweep)
    _add_fit_flags(p_sweep)
    p_sweep.add_argument("--data", required=True)
    p_sweep.add_argument("--out", required=True, help="output directory")
    grid_group = p_sweep.add_mutually_exclusive_group(required=True)
    grid_group.add_argument("--lambda-grid", dest="lambda_grid", type=_grid, help="start:step:end, inclusive")
    grid_group.add_argument("--mu-grid", dest="mu_grid", type=_grid, help="start:step:end, inclusive")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_check = sub.add_parser("check", help="verify the descent invariants of one combination on a dataset")
    _add_risk_flags(p_check)
    _add_fit_flags(p_check)
    p_check.add_argument("--data", required=True)
    p_check.set_defaults(handler=_cmd_check)

    return parser.parse_args(argv)


def _spec_from_args(args) -> RiskSpec:
    return RiskSpec(
        loss=Loss(args.loss),
        penalty=Penalty(args.penalty),
        lam=args.lam,
        mu=args.mu,
        epsilon=args.epsilon,
    )


def _options_from_args(args) -> FitOptions:
    if args.iterations < 1:
        raise ValueError("iterations must be >= 1")
    return FitOptions(max_iterations=args.iterations, risk_tolerance=args.tolerance, init=Init(args.init))


def _trajectory_path(model_path) -> Path:
    p = Path(model_path)
    return p.with_name(p.stem + ".trajectory.csv")


def _cmd_fit(args) -> int:
    spec = _spec_from_args(args)
    dataset = load_dataset_csv(args.data)
    result = fit(spec, dataset, _options_from_args(args))
    write_model(result, spec, args.out)
    trajectory = _trajectory_path(args.out)
    write_trajectory_csv(result, trajectory)
    print(
        f"fit {spec.loss.value}+{spec.penalty.value}: {result.iterations_run} iterations"
        f" ({result.termination_reason.value}), exact risk {result.exact_risk_trajectory[-1]:.6g},"
        f" smoothed risk {result.smoothed_risk_trajectory[-1]:.6g}"
    )
    print(f"wrote {args.out} and {trajectory}")
    return EXIT_OK


def _cmd_predict(args) -> int:
    theta, _spec = read_model(args.model)
    header, rows, features = load_feature_rows_csv(args.data)
    if features.shape[1] != theta.q:
        raise DataError(f"{args.data}: model expects {theta.q} features, file has {features.shape[1]}")
    labels = predict_batch(theta, features)
    with Path(args.out).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header + ["predicted"])
        for row, label in zip(rows, labels):
            writer.writerow(row + [str(int(label))])
    print(f"wrote {len(rows)} predictions to {args.out}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    dataset = generate_gaussian_mixture(args.n, seed=args.seed)
    write_dataset_csv(dataset, args.out)
    print(f"wrote {dataset.n} samples ({dataset.n // 2} per class) to {args.out}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec_base = _spec_from_args(args)
    options = _options_from_args(args)
    dataset = load_dataset_csv(args.data)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    param = "lambda" if args.lambda_grid is not None else "mu"
    grid = args.lambda_grid if param == "lambda" else args.mu_grid

    def spec_for(value: float) -> RiskSpec:
        lam = value if param == "lambda" else spec_base.lam
        mu = value if param == "mu" else spec_base.mu
        return RiskSpec(loss=spec_base.loss, penalty=spec_base.penalty, lam=lam, mu=mu, epsilon=spec_base.epsilon)

    def run_point(value: float):
        result = fit(spec_for(value), dataset, options)
        accuracy = float(np.mean(predict_batch(result.theta, dataset.features) == dataset.labels))
        return result, accuracy

    # grid points are independent fits over a shared read-only dataset; the
    # output files are per-point, so concurrent execution cannot contend
    with ThreadPoolExecutor(max_workers=min(4, len(grid))) as pool:
        outcomes = list(pool.map(run_point, grid))

    summary_path = out_dir / "summary.csv"
    hyperplane_path = out_dir / "hyperplanes.csv"
    with summary_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["parameter", "value", "terminal_exact_risk", "terminal_smoothed_risk", "training_accuracy"])
        for value, (result, accuracy) in zip(grid, outcomes):
            writer.writerow(
                [
                    param,
                    format(value, ".17g"),
                    format(result.exact_risk_trajectory[-1], ".17g"),
                    format(result.smoothed_risk_trajectory[-1], ".17g"),
                    format(accuracy, ".17g"),
                ]
            )
    with hyperplane_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["parameter", "value", "alpha"] + [f"beta_{j + 1}" for j in range(dataset.q)])
        for value, (result, _accuracy) in zip(grid, outcomes):
            writer.writerow(
                [param, format(value, ".17g"), format(result.theta.alpha, ".17g")]
                + [format(v, ".17g") for v in result.theta.beta]
            )
    for value, (result, _accuracy) in zip(grid, outcomes):
        write_trajectory_csv(result, out_dir / f"trajectory_{param}_{value:g}.csv")

    print(f"swept {param} over {len(grid)} points; wrote {summary_path} and {hyperplane_path}")
    return EXIT_OK


def _cmd_check(args) -> int:
    spec = _spec_from_args(args)
    options = _options_from_args(args)
    dataset = load_dataset_csv(args.data)
    design = build_design_matrix(dataset)

    from .engine import _initial_theta  # same starting point fit would use

    theta = _initial_theta(options, spec, design)
    monitor = monitor_kind(spec)

    worst_descent = -np.inf
    worst_anchor = 0.0
    worst_surrogate = -np.inf
    risk_prev = monitored_risk(spec, theta, dataset)
    for _ in range(options.max_iterations):
        anchor_value = majorizer_objective(spec, theta, theta, design)
        gap = abs(anchor_value - risk_prev) / (1.0 + abs(risk_prev))
        worst_anchor = max(worst_anchor, gap)

        theta_next = irls_step(spec, theta, design)
        surrogate_drop = majorizer_objective(spec, theta_next, theta, design) - anchor_value
        worst_surrogate = max(worst_surrogate, surrogate_drop / (1.0 + abs(anchor_value)))

        risk_next = monitored_risk(spec, theta_next, dataset)
        worst_descent = max(worst_descent, (risk_next - risk_prev) / (1.0 + abs(risk_prev)))
        theta, risk_prev = theta_next, risk_next

    checks = [
        (f"monotone {monitor.value}-risk descent", worst_descent <= DESCENT_SLACK, worst_descent),
        ("surrogate touches risk at anchor", worst_anchor <= ANCHOR_SLACK, worst_anchor),
        ("update does not raise the surrogate", worst_surrogate <= SURROGATE_SLACK, worst_surrogate),
    ]
    failed = False
    for name, ok, value in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name} (worst relative violation {value:.3e})")
        failed |= not ok
    return EXIT_INVARIANT if failed else EXIT_OK


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (SingularSystemError, FitError) as err:
        print(f"solver error: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
