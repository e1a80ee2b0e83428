import csv

import numpy as np
import pytest

from irlsvm import (
    ModelParams,
    SingularSystemError,
    load_dataset_csv,
    predict_batch,
    read_model,
    read_trajectory_csv,
    write_dataset_csv,
)
from irlsvm.cli import main, parse_args

from helpers import make_dataset


@pytest.fixture
def data_csv(tmp_path):
    path = tmp_path / "d.csv"
    write_dataset_csv(make_dataset(seed=50, n=60, q=2), path)
    return path


def test_parse_fit_flags():
    args = parse_args(
        ["fit", "--loss", "hinge", "--penalty", "l2", "--lambda", "0.4", "--data", "d.csv", "--out", "m.model"]
    )
    assert args.verb == "fit"
    assert args.loss == "hinge" and args.penalty == "l2"
    assert args.lam == 0.4 and args.mu == 0.0


def test_negative_lambda_is_usage_error(capsys):
    code = main(["fit", "--loss", "hinge", "--penalty", "l2", "--lambda", "-1", "--data", "d.csv", "--out", "m"])
    assert code == 2
    assert "lambda must be >= 0" in capsys.readouterr().err


def test_unknown_loss_is_usage_error():
    assert main(["fit", "--loss", "huber", "--penalty", "l2", "--data", "d.csv", "--out", "m"]) == 2


def test_zero_epsilon_is_usage_error():
    assert main(["fit", "--loss", "hinge", "--penalty", "l2", "--epsilon", "0", "--data", "d", "--out", "m"]) == 2


def test_grid_parsing():
    args = parse_args(
        ["sweep", "--loss", "squared-hinge", "--penalty", "l2", "--lambda-grid", "0:0.1:0.4", "--data", "d", "--out", "o"]
    )
    assert len(args.lambda_grid) == 5
    np.testing.assert_allclose(args.lambda_grid, [0.0, 0.1, 0.2, 0.3, 0.4])


def test_grid_rejects_misaligned_end():
    code = main(
        ["sweep", "--loss", "hinge", "--penalty", "l2", "--lambda-grid", "0:0.3:0.4", "--data", "d", "--out", "o"]
    )
    assert code == 2


def test_sweep_requires_exactly_one_grid(data_csv, tmp_path):
    assert main(["sweep", "--loss", "hinge", "--penalty", "l2", "--data", str(data_csv), "--out", str(tmp_path)]) == 2
    code = main(
        [
            "sweep", "--loss", "hinge", "--penalty", "elastic",
            "--lambda-grid", "0:0.1:0.2", "--mu-grid", "0:0.1:0.2",
            "--data", str(data_csv), "--out", str(tmp_path),
        ]
    )
    assert code == 2


def test_missing_data_file_is_data_error(tmp_path):
    code = main(
        ["fit", "--loss", "hinge", "--penalty", "l2", "--data", str(tmp_path / "none.csv"), "--out", str(tmp_path / "m")]
    )
    assert code == 3


def test_fit_writes_model_and_trajectory(data_csv, tmp_path):
    model_path = tmp_path / "m.model"
    code = main(
        [
            "fit", "--loss", "logistic", "--penalty", "elastic", "--lambda", "0.2", "--mu", "0.1",
            "--data", str(data_csv), "--out", str(model_path),
        ]
    )
    assert code == 0
    theta, spec = read_model(model_path)
    assert spec.lam == 0.2 and spec.mu == 0.1
    iterations, exact, smoothed = read_trajectory_csv(tmp_path / "m.trajectory.csv")
    assert iterations[0] == 0
    assert len(exact) == len(smoothed) >= 2


def test_predict_appends_label_column(data_csv, tmp_path):
    model_path = tmp_path / "m.model"
    assert main(["fit", "--loss", "hinge", "--penalty", "l2", "--lambda", "0.1", "--data", str(data_csv), "--out", str(model_path)]) == 0
    out_path = tmp_path / "preds.csv"
    assert main(["predict", "--model", str(model_path), "--data", str(data_csv), "--out", str(out_path)]) == 0

    with out_path.open() as handle:
        rows = list(csv.reader(handle))
    assert rows[0][-1] == "predicted"
    assert len(rows) == 61  # header + 60 samples

    theta, _ = read_model(model_path)
    ds = load_dataset_csv(data_csv)
    expected = predict_batch(theta, ds.features)
    assert [int(r[-1]) for r in rows[1:]] == [int(v) for v in expected]


def test_predict_feature_count_mismatch(data_csv, tmp_path):
    model_path = tmp_path / "m.model"
    assert main(["fit", "--loss", "hinge", "--penalty", "l2", "--data", str(data_csv), "--out", str(model_path)]) == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("x1,x2,x3,y\n1,2,3,1\n")
    assert main(["predict", "--model", str(model_path), "--data", str(bad), "--out", str(tmp_path / "p.csv")]) == 3


def test_simulate_writes_balanced_dataset(tmp_path):
    out = tmp_path / "sim.csv"
    assert main(["simulate", "--n", "50", "--seed", "3", "--out", str(out)]) == 0
    ds = load_dataset_csv(out)
    assert ds.n == 50
    assert int((ds.labels == 1).sum()) == 25


def test_simulate_rejects_odd_n(tmp_path):
    assert main(["simulate", "--n", "7", "--out", str(tmp_path / "x.csv")]) == 3


def test_sweep_artifacts(data_csv, tmp_path):
    out_dir = tmp_path / "sweep"
    code = main(
        [
            "sweep", "--loss", "squared-hinge", "--penalty", "l2", "--lambda-grid", "0:0.1:0.4",
            "--tolerance", "0", "--data", str(data_csv), "--out", str(out_dir),
        ]
    )
    assert code == 0
    trajectories = sorted(out_dir.glob("trajectory_lambda_*.csv"))
    assert len(trajectories) == 5
    for path in trajectories:
        _, exact, _ = read_trajectory_csv(path)
        assert len(exact) == 51
        assert (np.diff(exact) <= 1e-10 * (1.0 + np.abs(exact[:-1]))).all()

    with (out_dir / "summary.csv").open() as handle:
        summary = list(csv.reader(handle))
    assert summary[0] == ["parameter", "value", "terminal_exact_risk", "terminal_smoothed_risk", "training_accuracy"]
    assert len(summary) == 6
    terminal = [float(r[2]) for r in summary[1:]]
    assert (np.diff(terminal) >= -1e-8).all()

    with (out_dir / "hyperplanes.csv").open() as handle:
        hyper = list(csv.reader(handle))
    assert hyper[0] == ["parameter", "value", "alpha", "beta_1", "beta_2"]
    assert len(hyper) == 6


def test_sweep_matches_independent_fits(data_csv, tmp_path):
    out_dir = tmp_path / "sweep"
    assert main(
        [
            "sweep", "--loss", "hinge", "--penalty", "l1", "--mu-grid", "0:0.1:0.2",
            "--data", str(data_csv), "--out", str(out_dir),
        ]
    ) == 0
    # a sweep point is exactly the fit the plain command would produce
    model_path = tmp_path / "single.model"
    assert main(
        ["fit", "--loss", "hinge", "--penalty", "l1", "--mu", "0.1", "--data", str(data_csv), "--out", str(model_path)]
    ) == 0
    single = (tmp_path / "single.trajectory.csv").read_bytes()
    swept = (out_dir / "trajectory_mu_0.1.csv").read_bytes()
    assert single == swept


def test_check_passes_on_valid_combination(data_csv, capsys):
    code = main(["check", "--loss", "logistic", "--penalty", "elastic", "--lambda", "0.2", "--mu", "0.1", "--data", str(data_csv)])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 3 and "[FAIL]" not in out


def test_check_flags_descent_violation(data_csv, monkeypatch, capsys):
    import irlsvm.cli as cli_module

    def broken_step(spec, theta, design):
        return ModelParams(alpha=theta.alpha + 1.0, beta=np.asarray(theta.beta) + 1.0)

    monkeypatch.setattr(cli_module, "irls_step", broken_step)
    code = main(["check", "--loss", "hinge", "--penalty", "l2", "--lambda", "0.1", "--data", str(data_csv)])
    assert code == 5
    assert "[FAIL]" in capsys.readouterr().out


def test_solver_failure_maps_to_exit_4(data_csv, tmp_path, monkeypatch):
    import irlsvm.cli as cli_module

    def failing_fit(*args, **kwargs):
        raise SingularSystemError("injected")

    monkeypatch.setattr(cli_module, "fit", failing_fit)
    code = main(["fit", "--loss", "hinge", "--penalty", "l2", "--data", str(data_csv), "--out", str(tmp_path / "m")])
    assert code == 4
