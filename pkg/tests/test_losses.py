import numpy as np
import pytest
from numpy.testing import assert_allclose

from irlsvm import Loss
from irlsvm.losses import (
    average_loss,
    hinge_state,
    logistic_state,
    loss_value,
    majorizer_value,
    smoothed_loss_value,
    squared_hinge_state,
)

EPS = 1e-6
TINY = 1e-300  # stands in for the eps -> 0 limit


def test_loss_value_examples():
    assert loss_value(Loss.HINGE, 1.0) == 0.0
    assert loss_value(Loss.HINGE, -1.0) == 2.0
    assert_allclose(loss_value(Loss.LOGISTIC, 0.0), np.log(2.0), rtol=1e-15)
    assert loss_value(Loss.SQUARED_HINGE, -1.0) == 4.0
    assert loss_value(Loss.LEAST_SQUARES, 3.0) == 4.0


def test_loss_value_vectorized_matches_scalar():
    m = np.linspace(-5, 5, 41)
    for kind in Loss:
        values = loss_value(kind, m)
        assert_allclose(values, [loss_value(kind, float(x)) for x in m], rtol=1e-15)


def test_logistic_loss_is_overflow_safe():
    assert loss_value(Loss.LOGISTIC, -1000.0) == 1000.0
    assert loss_value(Loss.LOGISTIC, 1000.0) == 0.0
    assert np.isfinite(loss_value(Loss.LOGISTIC, np.array([-750.0, 750.0]))).all()


def test_smoothed_loss_examples():
    assert_allclose(smoothed_loss_value(Loss.HINGE, 1.0, EPS), 5e-4, rtol=1e-12)
    # high-precision evaluation of (sqrt(4 + 1e-6) + 2)/2
    assert_allclose(smoothed_loss_value(Loss.HINGE, -1.0, EPS), 2.000000124999992187500976562, rtol=1e-15)
    assert smoothed_loss_value(Loss.LEAST_SQUARES, 0.0, EPS) == 1.0


def test_smoothing_identity_for_absolute_value_free_losses():
    m = np.linspace(-4, 4, 17)
    for kind in (Loss.LEAST_SQUARES, Loss.SQUARED_HINGE, Loss.LOGISTIC):
        assert_allclose(smoothed_loss_value(kind, m, EPS), loss_value(kind, m), rtol=0, atol=0)


def test_smoothing_gap_bound():
    rng = np.random.default_rng(0)
    m = rng.uniform(-30, 30, 10_000)
    gap = smoothed_loss_value(Loss.HINGE, m, EPS) - loss_value(Loss.HINGE, m)
    assert (gap > 0).all()
    assert (gap <= np.sqrt(EPS) / 2 + 1e-15).all()


def test_average_loss():
    assert average_loss(Loss.HINGE, np.zeros(5)) == 1.0
    assert average_loss(Loss.HINGE, np.ones(7)) == 0.0
    assert_allclose(average_loss(Loss.LOGISTIC, np.zeros(2)), np.log(2.0), rtol=1e-15)
    with pytest.raises(ValueError):
        average_loss(Loss.HINGE, np.array([]))


def test_hinge_state_examples():
    state = hinge_state(np.array([0.0]), EPS)
    assert_allclose(state.gamma[0], 1.000000499999875, rtol=1e-15)
    assert_allclose(state.weights[0], 0.24999987500009375, rtol=1e-15)
    assert_allclose(state.targets[0], 2.000000499999875, rtol=1e-15)

    state = hinge_state(np.array([1.0]), EPS)
    assert_allclose(state.gamma[0], 1e-3, rtol=1e-12)
    assert_allclose(state.weights[0], 250.0, rtol=1e-12)
    assert_allclose(state.targets[0], 1.001, rtol=1e-12)

    state = hinge_state(np.array([2.0]), TINY)
    assert_allclose([state.gamma[0], state.weights[0], state.targets[0]], [1.0, 0.25, 2.0], rtol=1e-15)


def test_hinge_state_weight_identity():
    rng = np.random.default_rng(1)
    state = hinge_state(rng.uniform(-10, 10, 1000), EPS)
    assert (state.gamma >= np.sqrt(EPS)).all()
    assert_allclose(state.weights * 4.0 * state.gamma, 1.0, rtol=1e-15)


def test_squared_hinge_state():
    state = squared_hinge_state(np.array([2.0, 0.5, 1.0]))
    assert list(state.upsilon) == [1.0, 0.0, 0.0]
    assert list(state.targets) == [2.0, 1.0, 1.0]
    # targets recombine as (1 - upsilon) + upsilon * m
    m = np.linspace(-3, 3, 13)
    state = squared_hinge_state(m)
    assert_allclose(state.targets, (1.0 - state.upsilon) + state.upsilon * m, rtol=0, atol=0)


def test_logistic_state():
    m = np.array([0.0, np.log(3.0), -np.log(3.0)])
    state = logistic_state(m)
    assert_allclose(state.pi, [0.5, 0.25, 0.75], rtol=1e-14)
    assert_allclose(state.targets, m, rtol=0, atol=0)
    big = logistic_state(np.array([-800.0, 800.0]))
    assert (big.pi > 0).all() and (big.pi < 1).all()


def test_majorizer_examples():
    # tangency at the anchor in the eps -> 0 limit
    assert_allclose(majorizer_value(Loss.HINGE, -1.0, -1.0, TINY), 2.0, rtol=1e-15)
    # active branch of the squared hinge is the loss itself
    assert majorizer_value(Loss.SQUARED_HINGE, 1.0, -1.0, EPS) == 0.0
    # high-precision values: log 2 - 1/2 + 1/8 vs log(1 + e^-1)
    assert_allclose(majorizer_value(Loss.LOGISTIC, 1.0, 0.0, EPS), 0.3181471805599453, rtol=1e-15)
    assert_allclose(loss_value(Loss.LOGISTIC, 1.0), 0.3132616875182228, rtol=1e-15)


def _reference(kind, m):
    if kind is Loss.HINGE:
        return smoothed_loss_value(kind, m, EPS)
    return loss_value(kind, m)


@pytest.mark.parametrize("kind", list(Loss), ids=[k.value for k in Loss])
def test_majorizer_tangency(kind):
    rng = np.random.default_rng(42)
    m = rng.uniform(-20, 22, 20_000)
    assert np.abs(majorizer_value(kind, m, m, EPS) - _reference(kind, m)).max() <= 1e-12


@pytest.mark.parametrize("kind", list(Loss), ids=[k.value for k in Loss])
def test_majorizer_domination(kind):
    rng = np.random.default_rng(43)
    m = rng.uniform(-20, 22, 20_000)
    m_ref = rng.uniform(-20, 22, 20_000)
    deficit = _reference(kind, m) - majorizer_value(kind, m, m_ref, EPS)
    assert deficit.max() <= 1e-12


def test_hinge_majorizer_limit_matches_plain_hinge():
    rng = np.random.default_rng(44)
    m = rng.uniform(-20, 22, 5_000)
    assert np.abs(majorizer_value(Loss.HINGE, m, m, TINY) - loss_value(Loss.HINGE, m)).max() <= 1e-12


def test_logistic_curvature_bound():
    m = np.linspace(-50, 50, 10_001)
    pi = logistic_state(m).pi
    assert (pi * (1.0 - pi) <= 0.25).all()


@pytest.mark.parametrize("kind", list(Loss), ids=[k.value for k in Loss])
def test_loss_is_convex_in_margin(kind):
    rng = np.random.default_rng(45)
    m1 = rng.uniform(-15, 15, 5_000)
    m2 = rng.uniform(-15, 15, 5_000)
    mid = loss_value(kind, (m1 + m2) / 2.0)
    assert (mid <= (loss_value(kind, m1) + loss_value(kind, m2)) / 2.0 + 1e-12).all()
