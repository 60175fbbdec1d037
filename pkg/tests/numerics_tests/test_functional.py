# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np
import pytest

from casein.errors import ConfigurationError
from casein.numerics import Tape, Tensor, gradcheck
from casein.numerics import functional as F


BOUNDARIES = [(0, 3), (3, 4), (4, 8), (8, 10)]


def _check(function, *arrays, **kwargs):
    tensors = [Tensor(array) for array in arrays]
    rng = np.random.default_rng(42)
    weights = {}

    def scalar():
        output = function(*tensors)
        if output.shape not in weights:
            weights[output.shape] = rng.normal(size=output.shape)
        return F.sum(F.mul(output, weights[output.shape]))

    result = gradcheck(scalar, tensors, **kwargs)
    assert result.passed(), result


def _away_from_zero(rng, shape):
    return rng.uniform(0.05, 1.0, size=shape) * rng.choice([-1.0, 1.0], size=shape)


@pytest.mark.parametrize("seed", range(20))
def test_elementwise_gradients(seed):
    """
    Check add, sub and mul, broadcasting included.
    """
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(4, 3)), rng.normal(size=(1, 3))
    _check(F.add, a, b)
    _check(F.sub, a, b)
    _check(F.mul, a, b)


@pytest.mark.parametrize("seed", range(20))
def test_activation_gradients(seed):
    rng = np.random.default_rng(seed)
    x = _away_from_zero(rng, (5, 4))
    _check(lambda t: F.leaky_relu(t, 0.1), x)
    _check(F.sigmoid, rng.normal(size=(5, 4)) * 3)
    _check(F.softmax, rng.normal(size=(5, 4)))


@pytest.mark.parametrize("seed", range(20))
def test_linear_and_matmul_gradients(seed):
    rng = np.random.default_rng(seed)
    x, weight, bias = rng.normal(size=(6, 4)), rng.normal(size=(3, 4)), rng.normal(size=3)
    _check(F.linear, x, weight, bias)
    _check(F.linear, rng.normal(size=4), weight, bias)
    _check(F.matmul, x, rng.normal(size=(4, 2)))


@pytest.mark.parametrize("seed", range(20))
def test_conv1d_gradients(seed):
    rng = np.random.default_rng(seed)
    _check(F.conv1d, rng.normal(size=(7, 3)), rng.normal(size=(2, 3, 5)), rng.normal(size=2))
    # A kernel wider than the sequence only sees padding on the edges.
    _check(F.conv1d, rng.normal(size=(2, 3)), rng.normal(size=(4, 3, 5)))


@pytest.mark.parametrize("seed", range(20))
def test_segment_gradients(seed):
    rng = np.random.default_rng(seed)
    _check(lambda x: F.avg_pool_segments(x, BOUNDARIES), rng.normal(size=(10, 3)))
    _check(lambda x: F.expand_segments(x, [3, 1, 4, 2]), rng.normal(size=(4, 3)))
    _check(F.global_avg_pool, rng.normal(size=(6, 3)))
    _check(F.center_time, rng.normal(size=(6, 3)))
    _check(lambda a, b: F.concat([a, b], axis=1), rng.normal(size=(4, 2)), rng.normal(size=(4, 3)))
    _check(lambda t: F.mean(t), rng.normal(size=(4, 2)))


def test_conv1d_matches_direct_evaluation():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(6, 2))
    weight = rng.normal(size=(3, 2, 3))
    bias = rng.normal(size=3)

    padded = np.pad(x, ((1, 1), (0, 0)))
    expected = np.zeros((6, 3))
    for t in range(6):
        for o in range(3):
            expected[t, o] = bias[o]
            for c in range(2):
                for j in range(3):
                    expected[t, o] += padded[t + j, c] * weight[o, c, j]

    result = F.conv1d(Tensor(x), Tensor(weight), Tensor(bias))
    np.testing.assert_allclose(result.data, expected, atol=1e-5)


def test_conv1d_is_linear():
    rng = np.random.default_rng(1)
    x, y = rng.normal(size=(9, 4)), rng.normal(size=(9, 4))
    weight = Tensor(rng.normal(size=(5, 4, 3)))

    combined = F.conv1d(Tensor(2.0 * x - 0.5 * y), weight)
    separate = 2.0 * F.conv1d(Tensor(x), weight).data - 0.5 * F.conv1d(Tensor(y), weight).data
    np.testing.assert_allclose(combined.data, separate, atol=1e-5)


def test_conv1d_rejects_bad_shapes():
    with pytest.raises(ConfigurationError):
        F.conv1d(Tensor(np.zeros((4, 2))), Tensor(np.zeros((1, 2, 2))))
    with pytest.raises(ConfigurationError):
        F.conv1d(Tensor(np.zeros((4, 3))), Tensor(np.zeros((1, 2, 3))))


def test_pooling_then_expanding_keeps_segment_means():
    rng = np.random.default_rng(2)
    x = Tensor(rng.normal(size=(10, 3)))
    pooled = F.avg_pool_segments(x, BOUNDARIES)
    expanded = F.expand_segments(pooled, [3, 1, 4, 2])
    assert expanded.shape == (10, 3)
    repooled = F.avg_pool_segments(expanded, BOUNDARIES)
    np.testing.assert_allclose(repooled.data, pooled.data, rtol=1e-6)
    np.testing.assert_allclose(pooled.data[2], x.data[4:8].mean(axis=0), rtol=1e-6)


@pytest.mark.parametrize(
    "boundaries,frames",
    [
        ([], None),
        ([(0, 2), (2, 2)], None),
        ([(1, 3)], None),
        ([(0, 2), (3, 4)], None),
        ([(0, 2), (2, 4)], 5),
    ],
)
def test_invalid_segments(boundaries, frames):
    with pytest.raises(ConfigurationError):
        F.segment_table(boundaries, frames)


def test_straight_through_copies_the_gradient():
    source = Tensor([[1.0, 2.0], [3.0, 4.0]], requires_grad=True)
    with Tape() as tape:
        out = F.straight_through(source, np.array([[0.0, 0.0], [1.0, 1.0]]))
        loss = F.sum(F.mul(out, np.array([[1.0, 2.0], [3.0, 4.0]])))
    tape.backward(loss)
    np.testing.assert_array_equal(out.data, [[0.0, 0.0], [1.0, 1.0]])
    np.testing.assert_array_equal(source.grad, [[1.0, 2.0], [3.0, 4.0]])


def test_stop_gradient_blocks_the_gradient():
    x = Tensor([1.0, 2.0], requires_grad=True)
    with Tape() as tape:
        loss = F.sum(F.mul(F.stop_gradient(x), x))
    tape.backward(loss)
    np.testing.assert_array_equal(x.grad, [1.0, 2.0])


def test_embedding_accumulates_repeated_rows():
    table = Tensor(np.arange(6.0).reshape(3, 2), requires_grad=True)
    with Tape() as tape:
        rows = F.embedding(table, [2, 0, 2])
        loss = F.sum(rows)
    tape.backward(loss)
    np.testing.assert_array_equal(rows.data, [[4, 5], [0, 1], [4, 5]])
    np.testing.assert_array_equal(table.grad, [[1, 1], [0, 0], [2, 2]])
    with pytest.raises(ConfigurationError):
        F.embedding(table, [3])


def test_nothing_is_recorded_without_a_tape_or_gradients():
    x = Tensor([1.0, 2.0])
    with Tape() as tape:
        F.add(x, x)
    assert len(tape) == 0

    y = Tensor([1.0, 2.0], requires_grad=True)
    F.add(y, y)
    with Tape() as tape:
        F.add(y, y)
    assert len(tape) == 1


def test_scalars_keep_the_precision():
    x = Tensor(np.ones(3))
    assert x.dtype == np.float32
    assert (x * 2.0).dtype == np.float32
    assert (1.0 - x).dtype == np.float32


def test_center_time_removes_the_average_over_time():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(7, 4)) + np.array([0.45, 2.0, -1.0, 0.0])
    centered = F.center_time(Tensor(x))
    np.testing.assert_allclose(centered.data.mean(axis=0), 0.0, atol=1e-6)
    np.testing.assert_allclose(np.diff(centered.data, axis=0), np.diff(x, axis=0), atol=1e-5)
    # A constant window carries nothing.
    np.testing.assert_allclose(F.center_time(Tensor(np.full((3, 2), 0.45))).data, 0.0, atol=1e-7)
