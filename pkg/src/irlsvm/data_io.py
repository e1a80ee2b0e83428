"""Dataset CSV ingestion, the seeded two-Gaussian generator, and model /
trajectory persistence.

File conventions: CSVs are comma-separated UTF-8 with a header row and LF
line endings; the label column is named "y" and holds -1 or 1; floats are
written with 17 significant digits so values round-trip bit-for-bit. Model
files are flat "key = value" text documents with a fixed key set.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import Dataset, FitResult, Loss, ModelParams, Penalty, RiskSpec

MODEL_FORMAT = "irlsvm-model/1"
LABEL_COLUMN = "y"


class DataError(ValueError):
    """File-level problem: missing/malformed content, bad labels, bad cells."""


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def load_dataset_csv(path) -> Dataset:
    """Read a labeled dataset; the header must name the label column "y"."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty file, header required") from None
            rows = list(reader)
    except OSError as err:
        raise DataError(f"{path}: {err.strerror}") from err

    header = [name.strip() for name in header]
    if LABEL_COLUMN not in header:
        raise DataError(f"{path}: missing label column '{LABEL_COLUMN}'")
    label_idx = header.index(LABEL_COLUMN)
    feature_idx = [i for i in range(len(header)) if i != label_idx]
    if not feature_idx:
        raise DataError(f"{path}: no feature columns")
    if not rows:
        raise DataError(f"{path}: no samples")

    features = np.empty((len(rows), len(feature_idx)))
    labels = np.empty(len(rows))
    for r, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
        for c, i in enumerate(feature_idx):
            try:
                features[r - 1, c] = float(row[i])
            except ValueError:
                raise DataError(f"{path}: non-numeric cell at row {r}, column '{header[i]}'") from None
        try:
            label = float(row[label_idx])
        except ValueError:
            raise DataError(f"{path}: non-numeric label at row {r}") from None
        if label not in (-1.0, 1.0):
            raise DataError(f"{path}: label at row {r} is {row[label_idx]!r}, must be -1 or 1")
        labels[r - 1] = label
    try:
        return Dataset(features=features, labels=labels)
    except ValueError as err:
        raise DataError(f"{path}: {err}") from err


def write_dataset_csv(dataset: Dataset, path) -> None:
    """Write a dataset with columns x1..xq then y."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([f"x{j + 1}" for j in range(dataset.q)] + [LABEL_COLUMN])
        for t, y in zip(dataset.features, dataset.labels):
            writer.writerow([_fmt(v) for v in t] + [str(int(y))])


def load_feature_rows_csv(path) -> tuple[list[str], list[list[str]], np.ndarray]:
    """Read a CSV for prediction: returns (header, raw rows, feature matrix).

    Every column except an optional "y" is treated as a feature, in header
    order; the raw rows are returned untouched so callers can append columns.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = [name.strip() for name in next(reader)]
            except StopIteration:
                raise DataError(f"{path}: empty file, header required") from None
            rows = list(reader)
    except OSError as err:
        raise DataError(f"{path}: {err.strerror}") from err
    feature_idx = [i for i, name in enumerate(header) if name != LABEL_COLUMN]
    if not feature_idx:
        raise DataError(f"{path}: no feature columns")
    if not rows:
        raise DataError(f"{path}: no samples")
    features = np.empty((len(rows), len(feature_idx)))
    for r, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
        for c, i in enumerate(feature_idx):
            try:
                features[r - 1, c] = float(row[i])
            except ValueError:
                raise DataError(f"{path}: non-numeric cell at row {r}, column '{header[i]}'") from None
    return header, rows, features


def _polar_normals(rng: np.random.Generator, count: int) -> np.ndarray:
    """Standard normals via the Marsaglia polar transform.

    Uniform doubles are consumed strictly in pairs (u, v) from the stream;
    pairs with u^2 + v^2 outside (0, 1) are rejected; accepted pairs yield two
    normals each, taken in stream order. The output therefore depends only on
    the generator stream, not on internal batch sizes.
    """
    out = np.empty(count)
    filled = 0
    while filled < count:
        pairs_needed = (count - filled + 1) // 2
        draw = 2 * (pairs_needed + max(8, pairs_needed // 4))
        u = 2.0 * rng.random(draw) - 1.0
        a, b = u[0::2], u[1::2]
        s = a * a + b * b
        keep = (s > 0.0) & (s < 1.0)
        factor = np.sqrt(-2.0 * np.log(s[keep]) / s[keep])
        accepted = np.empty(2 * factor.size)
        accepted[0::2] = a[keep] * factor
        accepted[1::2] = b[keep] * factor
        take = min(accepted.size, count - filled)
        out[filled : filled + take] = accepted[:take]
        filled += take
    return out


def generate_gaussian_mixture(n: int, mean_neg=(-1.0, -1.0), mean_pos=(1.0, 1.0), seed: int = 0) -> Dataset:
    """Two balanced spherical-Gaussian classes: the first n/2 samples carry
    label -1 around mean_neg, the rest label +1 around mean_pos.

    Deterministic given the seed: normals come from a PCG64 stream through
    the polar transform, filled row-major (sample by sample, coordinate by
    coordinate).
    """
    if n < 2 or n % 2:
        raise DataError(f"n must be a positive even integer, got {n}")
    mean_neg = np.asarray(mean_neg, dtype=float).ravel()
    mean_pos = np.asarray(mean_pos, dtype=float).ravel()
    if mean_neg.shape != mean_pos.shape:
        raise DataError("class means must have equal length")
    q = mean_neg.shape[0]
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = _polar_normals(rng, n * q).reshape(n, q)
    half = n // 2
    features = np.empty((n, q))
    features[:half] = mean_neg + noise[:half]
    features[half:] = mean_pos + noise[half:]
    labels = np.concatenate([-np.ones(half), np.ones(half)])
    return Dataset(features=features, labels=labels)


def write_model(result: FitResult, spec: RiskSpec, path) -> None:
    """Persist a fitted model as "key = value" lines."""
    path = Path(path)
    lines = [
        f"format = {MODEL_FORMAT}",
        f"loss = {spec.loss.value}",
        f"penalty = {spec.penalty.value}",
        f"lambda = {_fmt(spec.lam)}",
        f"mu = {_fmt(spec.mu)}",
        f"epsilon = {_fmt(spec.epsilon)}",
        f"alpha = {_fmt(result.theta.alpha)}",
    ]
    lines += [f"beta_{j + 1} = {_fmt(v)}" for j, v in enumerate(result.theta.beta)]
    lines += [
        f"iterations_run = {result.iterations_run}",
        f"terminal_exact_risk = {_fmt(result.exact_risk_trajectory[-1])}",
        f"terminal_smoothed_risk = {_fmt(result.smoothed_risk_trajectory[-1])}",
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


_SCALAR_MODEL_KEYS = {
    "format",
    "loss",
    "penalty",
    "lambda",
    "mu",
    "epsilon",
    "alpha",
    "iterations_run",
    "terminal_exact_risk",
    "terminal_smoothed_risk",
}


def read_model(path) -> tuple[ModelParams, RiskSpec]:
    """Read a model file back; unknown keys and format mismatches are errors."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise DataError(f"{path}: {err.strerror}") from err
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DataError(f"{path}: line {lineno} is not a 'key = value' entry")
        key, value = key.strip(), value.strip()
        if key in entries:
            raise DataError(f"{path}: duplicate key '{key}'")
        if key not in _SCALAR_MODEL_KEYS and not key.startswith("beta_"):
            raise DataError(f"{path}: unknown key '{key}'")
        entries[key] = value

    missing = _SCALAR_MODEL_KEYS - entries.keys()
    if missing:
        raise DataError(f"{path}: missing keys {sorted(missing)}")
    if entries["format"] != MODEL_FORMAT:
        raise DataError(f"{path}: format {entries['format']!r} not supported (expected {MODEL_FORMAT!r})")

    beta_keys = sorted(k for k in entries if k.startswith("beta_"))
    q = len(beta_keys)
    expected = [f"beta_{j + 1}" for j in range(q)]
    if q == 0 or beta_keys != sorted(expected):
        raise DataError(f"{path}: beta entries must be beta_1..beta_q, got {beta_keys}")

    def as_float(key):
        try:
            return float(entries[key])
        except ValueError:
            raise DataError(f"{path}: value for '{key}' is not numeric") from None

    try:
        loss = Loss(entries["loss"])
        penalty = Penalty(entries["penalty"])
    except ValueError as err:
        raise DataError(f"{path}: {err}") from None
    spec = RiskSpec(loss=loss, penalty=penalty, lam=as_float("lambda"), mu=as_float("mu"), epsilon=as_float("epsilon"))
    theta = ModelParams(alpha=as_float("alpha"), beta=np.array([as_float(k) for k in expected]))
    return theta, spec


def write_trajectory_csv(result: FitResult, path) -> None:
    """One row per recorded iterate: iteration, exact_risk, smoothed_risk."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["iteration", "exact_risk", "smoothed_risk"])
        for k, (exact, smoothed) in enumerate(zip(result.exact_risk_trajectory, result.smoothed_risk_trajectory)):
            writer.writerow([k, _fmt(exact), _fmt(smoothed)])


def read_trajectory_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read back a trajectory file: (iterations, exact risks, smoothed risks)."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != ["iteration", "exact_risk", "smoothed_risk"]:
                raise DataError(f"{path}: unexpected trajectory header {header}")
            rows = list(reader)
    except OSError as err:
        raise DataError(f"{path}: {err.strerror}") from err
    if not rows:
        raise DataError(f"{path}: no rows")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows])
    except ValueError as err:
        raise DataError(f"{path}: {err}") from None
    return data[:, 0].astype(int), data[:, 1], data[:, 2]
