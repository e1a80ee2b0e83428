"""Weighted Gram assembly and symmetric positive-definite solves.

Every update in the engine solves a system of the form
(Y'WY + diagonal) theta = Y'W r; this module owns that plumbing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .core import DesignMatrix


class SingularSystemError(RuntimeError):
    """Raised when a system stays numerically singular after jitter retries."""


@dataclass(frozen=True)
class SymmetricSystem:
    """A symmetric (q+1)x(q+1) matrix with its right-hand side."""

    matrix: np.ndarray
    rhs: np.ndarray


@dataclass(frozen=True)
class JitterPolicy:
    """Ridge fallback for singular systems: delta = base_scale * mean(diag),
    multiplied by growth after each failed retry."""

    base_scale: float = 1e-10
    retries: int = 3
    growth: float = 10.0


DEFAULT_JITTER = JitterPolicy()


@dataclass(frozen=True)
class SpdSolution:
    x: np.ndarray
    jitter_used: bool
    jitter: float


def weighted_gram(design: DesignMatrix, weights) -> np.ndarray:
    """Y'WY with W = diag(weights); exactly symmetric (one triangle mirrored)."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != design.n:
        raise ValueError(f"{design.n} rows but {w.shape[0]} weights")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ValueError("weights must be finite and nonnegative")
    prod = (design.rows * w[:, None]).T @ design.rows
    upper = np.triu(prod)
    return upper + np.triu(prod, 1).T


def weighted_rhs(design: DesignMatrix, weights, targets) -> np.ndarray:
    """Y'W r for target vector r."""
    w = np.asarray(weights, dtype=float).ravel()
    r = np.asarray(targets, dtype=float).ravel()
    if w.shape[0] != design.n or r.shape[0] != design.n:
        raise ValueError("weights and targets must have one entry per row")
    return design.rows.T @ (w * r)


def solve_spd(system: SymmetricSystem, policy: JitterPolicy | None = None) -> SpdSolution:
    """Solve A x = b by Cholesky factorization, with a ridge-jitter fallback.

    If the factorization fails (A singular or numerically indefinite), a
    diagonal delta*I is added with delta = base_scale * trace(A)/(q+1),
    retrying with delta growing tenfold, before giving up.
    """
    policy = policy or DEFAULT_JITTER
    a = np.asarray(system.matrix, dtype=float)
    b = np.asarray(system.rhs, dtype=float).ravel()
    if a.shape[0] != a.shape[1] or a.shape[0] != b.shape[0]:
        raise ValueError("matrix and rhs dimensions disagree")

    delta = policy.base_scale * np.trace(a) / a.shape[0]
    jitter = 0.0
    for attempt in range(policy.retries + 1):
        try:
            factor = cho_factor(a + jitter * np.eye(a.shape[0]), lower=True)
            x = cho_solve(factor, b)
            if np.isfinite(x).all():
                return SpdSolution(x=x, jitter_used=jitter > 0, jitter=jitter)
        except LinAlgError:
            pass
        jitter = delta * policy.growth**attempt
    smallest = float(np.linalg.eigvalsh(a)[0])
    raise SingularSystemError(
        f"system is singular after {policy.retries} jitter retries (smallest pivot {smallest:.3e})"
    )
