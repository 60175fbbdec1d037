# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np
import pytest

from casein.errors import ConfigurationError, DivergenceError
from casein.numerics import Adam, AdamState, Parameter, adam_step, lr_linear_decay


def _parameter(value, grad):
    p = Parameter(np.array([value]))
    p.astype(np.float64)
    p.grad = np.array([grad])
    return p


def test_first_step_moves_by_the_learning_rate():
    p = _parameter(0.0, 1.0)
    state = AdamState([p], lr=5e-4)
    adam_step([p], state)
    assert p.data[0] == pytest.approx(-5e-4, rel=1e-6)
    assert state.step == 1


def test_two_steps_match_a_scripted_trace():
    p = _parameter(0.0, 1.0)
    state = AdamState([p], lr=5e-4, beta1=0.9, beta2=0.98, epsilon=1e-8)
    adam_step([p], state)
    adam_step([p], state)

    value, m, v = 0.0, 0.0, 0.0
    for step in (1, 2):
        m = 0.9 * m + 0.1
        v = 0.98 * v + 0.02
        value -= 5e-4 * (m / (1 - 0.9**step)) / (np.sqrt(v / (1 - 0.98**step)) + 1e-8)
    assert p.data[0] == pytest.approx(value, abs=1e-9)


def test_parameters_without_gradient_still_decay_their_moments():
    moving = _parameter(1.0, 1.0)
    idle = _parameter(1.0, 0.0)
    idle.grad = None
    optimizer = Adam([moving, idle], lr=0.1)
    optimizer.step()
    assert moving.data[0] < 1.0
    assert idle.data[0] == 1.0


def test_non_finite_gradients_leave_everything_untouched():
    p = _parameter(1.0, np.inf)
    state = AdamState([p])
    with pytest.raises(DivergenceError):
        adam_step([p], state)
    assert p.data[0] == 1.0
    assert state.step == 0
    assert state.m[0][0] == 0


def test_state_must_match_the_parameters():
    state = AdamState([_parameter(0.0, 1.0)])
    with pytest.raises(ConfigurationError):
        adam_step([_parameter(0.0, 1.0), _parameter(0.0, 1.0)], state)


@pytest.mark.parametrize(
    "epoch,expected", [(0, 5e-4), (50, 2.5e-4), (99, 5e-6), (100, 0.0), (150, 0.0)]
)
def test_linear_decay(epoch, expected):
    assert lr_linear_decay(epoch, 100, 5e-4) == pytest.approx(expected)


def test_linear_decay_rejects_bad_epochs():
    with pytest.raises(ConfigurationError):
        lr_linear_decay(-1, 100, 5e-4)
    with pytest.raises(ConfigurationError):
        lr_linear_decay(0, 0, 5e-4)


def test_zero_grad():
    p = _parameter(0.0, 1.0)
    optimizer = Adam([p])
    optimizer.zero_grad()
    assert p.grad is None
    optimizer.lr = 1e-3
    assert optimizer.state.lr == 1e-3
