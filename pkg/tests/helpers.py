"""Shared test fixtures/constants."""

import numpy as np

from irlsvm import Dataset, Loss, Penalty

ALL_COMBOS = [(loss, pen) for loss in Loss for pen in Penalty]
ITERATIVE_COMBOS = [c for c in ALL_COMBOS if c != (Loss.LEAST_SQUARES, Penalty.L2)]
COMBO_IDS = [f"{loss.value}+{pen.value}" for loss, pen in ALL_COMBOS]
ITERATIVE_IDS = [f"{loss.value}+{pen.value}" for loss, pen in ITERATIVE_COMBOS]


def two_sample_dataset() -> Dataset:
    """The 2-sample fixture: t = (1), (-1) with labels +1, -1."""
    return Dataset(features=np.array([[1.0], [-1.0]]), labels=np.array([1.0, -1.0]))


def make_dataset(seed: int, n: int = 40, q: int = 3) -> Dataset:
    """Small random dataset with both classes present."""
    rng = np.random.default_rng(seed)
    features = rng.normal(size=(n, q))
    labels = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    labels[0], labels[-1] = -1.0, 1.0
    return Dataset(features=features, labels=labels)
