"""Shared domain types: datasets, design matrices, hyperplane parameters,
risk specifications, and fit results.

All types are immutable after construction (arrays are marked read-only) and
safe to share across threads. The operations here are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np


class Loss(Enum):
    """Per-sample loss, always a function of the margin m = y*(alpha + beta.t)."""

    HINGE = "hinge"
    LEAST_SQUARES = "least-squares"
    SQUARED_HINGE = "squared-hinge"
    LOGISTIC = "logistic"


class Penalty(Enum):
    """Penalty on the normal vector beta; the intercept is never penalized."""

    L2 = "l2"
    L1 = "l1"
    ELASTIC_NET = "elastic"


class TerminationReason(Enum):
    MAX_ITERATIONS = "max-iterations"
    RISK_TOLERANCE = "risk-tolerance"
    CLOSED_FORM = "closed-form"


DEFAULT_EPSILON = 1e-6


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """A labeled sample: feature rows t_i (n x q) and labels y_i in {-1, +1}.

    Features are used as-is; any transformation happens upstream.
    """

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.atleast_2d(np.asarray(self.features, dtype=float))
        labels = np.asarray(self.labels, dtype=float).ravel()
        if features.ndim != 2:
            raise ValueError("features must be a 2-d matrix")
        n, q = features.shape
        if n < 1 or q < 1:
            raise ValueError(f"need n >= 1 samples and q >= 1 features, got n={n}, q={q}")
        if labels.shape[0] != n:
            raise ValueError(f"{n} feature rows but {labels.shape[0]} labels")
        bad = np.nonzero(~np.isfinite(features).all(axis=1))[0]
        if bad.size:
            raise ValueError(f"non-finite feature in row {bad[0]}")
        off = np.nonzero((labels != 1.0) & (labels != -1.0))[0]
        if off.size:
            raise ValueError(f"label in row {off[0]} is {labels[off[0]]}, must be -1 or +1")
        object.__setattr__(self, "features", _readonly(features))
        object.__setattr__(self, "labels", _readonly(labels))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def q(self) -> int:
        return self.features.shape[1]


@dataclass
class DesignMatrix:
    """n x (q+1) matrix with rows y_i * (1, t_i); margins are rows @ theta."""

    rows: np.ndarray

    def __post_init__(self):
        self.rows = _readonly(self.rows)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def q(self) -> int:
        return self.rows.shape[1] - 1

    @cached_property
    def gram(self) -> np.ndarray:
        """Unit-weight Gram matrix Y'Y, cached (it is iteration-independent)."""
        from .linalg import weighted_gram

        g = weighted_gram(self, np.ones(self.n))
        g.flags.writeable = False
        return g


@dataclass(frozen=True)
class ModelParams:
    """Hyperplane parameters: intercept alpha and normal vector beta."""

    alpha: float
    beta: np.ndarray

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float).ravel()
        if not np.isfinite(self.alpha) or not np.isfinite(beta).all():
            raise ValueError("parameters must be finite")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", _readonly(beta))

    @property
    def q(self) -> int:
        return self.beta.shape[0]

    def as_vector(self) -> np.ndarray:
        """Stacked (alpha, beta) vector of length q+1."""
        return np.concatenate(([self.alpha], self.beta))

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "ModelParams":
        vec = np.asarray(vec, dtype=float).ravel()
        return cls(alpha=float(vec[0]), beta=vec[1:])

    @classmethod
    def zeros(cls, q: int) -> "ModelParams":
        return cls(alpha=0.0, beta=np.zeros(q))


@dataclass(frozen=True)
class RiskSpec:
    """One of the 12 loss x penalty risk combinations plus its constants.

    lam scales the 2-norm penalty, mu the 1-norm penalty, epsilon the
    smoothing constant. For Penalty.L2 the mu field is forced to 0, for
    Penalty.L1 lam is forced to 0, so the stored values always describe the
    risk actually minimized.
    """

    loss: Loss
    penalty: Penalty
    lam: float = 0.0
    mu: float = 0.0
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.mu < 0:
            raise ValueError("mu must be >= 0")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        lam, mu = float(self.lam), float(self.mu)
        if self.penalty is Penalty.L2:
            mu = 0.0
        elif self.penalty is Penalty.L1:
            lam = 0.0
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "epsilon", float(self.epsilon))


@dataclass(frozen=True)
class FitResult:
    """Output of a fit: final parameters plus both risk trajectories.

    Trajectories have one entry per recorded iterate including the initial
    point, so their length is iterations_run + 1.
    """

    theta: ModelParams
    exact_risk_trajectory: np.ndarray
    smoothed_risk_trajectory: np.ndarray
    iterations_run: int
    converged: bool
    termination_reason: TerminationReason

    def __post_init__(self):
        object.__setattr__(self, "exact_risk_trajectory", _readonly(self.exact_risk_trajectory))
        object.__setattr__(self, "smoothed_risk_trajectory", _readonly(self.smoothed_risk_trajectory))
        if len(self.exact_risk_trajectory) != self.iterations_run + 1:
            raise ValueError("trajectory length must be iterations_run + 1")
        if len(self.smoothed_risk_trajectory) != len(self.exact_risk_trajectory):
            raise ValueError("trajectories must have identical length")


def build_design_matrix(dataset: Dataset) -> DesignMatrix:
    """Assemble the n x (q+1) matrix with rows y_i * (1, t_i)."""
    bad = np.nonzero(~np.isfinite(dataset.features).all(axis=1))[0]
    if bad.size:
        raise ValueError(f"non-finite feature in row {bad[0]}")
    ones = np.ones((dataset.n, 1))
    rows = dataset.labels[:, None] * np.hstack([ones, dataset.features])
    return DesignMatrix(rows=rows)


def margins(design: DesignMatrix, theta: ModelParams) -> np.ndarray:
    """Margins m_i = y_i * (alpha + beta.t_i), i.e. the entries of Y @ theta."""
    if theta.q != design.q:
        raise ValueError(f"theta has {theta.q} features but design has {design.q}")
    return design.rows @ theta.as_vector()


def predict(theta: ModelParams, features: np.ndarray) -> int:
    """Predicted label sign(alpha + beta.t) for one feature vector.

    A decision value of exactly 0 returns +1 (fixed tie convention).
    """
    t = np.asarray(features, dtype=float).ravel()
    if t.shape[0] != theta.q:
        raise ValueError(f"expected {theta.q} features, got {t.shape[0]}")
    if not np.isfinite(t).all():
        raise ValueError("non-finite feature")
    return 1 if theta.alpha + theta.beta @ t >= 0 else -1


def predict_batch(theta: ModelParams, features: np.ndarray) -> np.ndarray:
    """Vector of predicted labels for an n x q feature matrix."""
    t = np.atleast_2d(np.asarray(features, dtype=float))
    if t.shape[1] != theta.q:
        raise ValueError(f"expected {theta.q} features, got {t.shape[1]}")
    scores = theta.alpha + t @ theta.beta
    return np.where(scores >= 0, 1.0, -1.0)
