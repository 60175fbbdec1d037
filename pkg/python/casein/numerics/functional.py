# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

"""
Differentiable primitive operations.

Every function evaluates its result with ``numpy`` and, when a tape is active, records a
closure computing the gradient of each input from the gradient of the output. Sequences
are laid out frame-major: ``time x channels``.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from casein.errors import ConfigurationError
from casein.numerics.tensor import Tensor, as_tensor, record


def _unbroadcast(grad, shape):
    """
    Sum a gradient over the axes that were broadcast to produce it.
    """
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _pair(a, b):
    """
    Turn the operands of a binary operation into tensors. Plain numbers take the precision
    of the other operand so they never promote it.
    """
    if not isinstance(a, Tensor) and isinstance(b, Tensor):
        a = Tensor.wrap(np.asarray(a, dtype=b.dtype))
    if not isinstance(b, Tensor) and isinstance(a, Tensor):
        b = Tensor.wrap(np.asarray(b, dtype=a.dtype))
    return as_tensor(a), as_tensor(b)


def add(a, b):
    a, b = _pair(a, b)

    def backward(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(grad, b.shape)

    return record(a.data + b.data, (a, b), backward)


def sub(a, b):
    a, b = _pair(a, b)

    def backward(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(-grad, b.shape)

    return record(a.data - b.data, (a, b), backward)


def mul(a, b):
    a, b = _pair(a, b)

    def backward(grad):
        return _unbroadcast(grad * b.data, a.shape), _unbroadcast(grad * a.data, b.shape)

    return record(a.data * b.data, (a, b), backward)


def matmul(a, b):
    """
    Matrix product of two 2-D tensors.
    """
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ConfigurationError(f"Can't multiply matrices of shapes {a.shape} and {b.shape}.")

    def backward(grad):
        return grad @ b.data.T, a.data.T @ grad

    return record(a.data @ b.data, (a, b), backward)


def sum(x):
    """
    Sum of every element, as a scalar tensor.
    """

    def backward(grad):
        return (np.broadcast_to(grad, x.shape).copy(),)

    return record(np.sum(x.data), (x,), backward)


def mean(x):
    """
    Mean of every element, as a scalar tensor.
    """
    count = x.size

    def backward(grad):
        return (np.full(x.shape, grad / count, dtype=x.dtype),)

    return record(np.mean(x.data), (x,), backward)


def concat(tensors, axis=-1):
    """
    Concatenate tensors along an axis.
    """
    tensors = tuple(as_tensor(t) for t in tensors)
    sizes = [t.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def backward(grad):
        return tuple(np.split(grad, splits, axis=axis))

    try:
        data = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError as e:
        raise ConfigurationError(f"Can't concatenate tensors: {e}") from e
    return record(data, tensors, backward)


def stop_gradient(x):
    """
    Values of ``x``; no gradient ever flows back through the result.
    """
    return as_tensor(x).detach()


def straight_through(source, value):
    """
    Values of ``value`` with the gradient passed, unchanged, to ``source``.

    This is the straight-through estimator used across a quantization step: the forward
    pass sees the quantized values and the backward pass treats the step as the identity.

    :param Tensor source: Continuous tensor receiving the gradient.
    :param value: Values to output, same shape as ``source``.
    """
    value = value.data if isinstance(value, Tensor) else np.asarray(value)
    if value.shape != source.shape:
        raise ConfigurationError(
            f"Straight-through values of shape {value.shape} don't match {source.shape}."
        )

    def backward(grad):
        return (grad,)

    return record(np.array(value, dtype=source.dtype), (source,), backward)


def leaky_relu(x, slope=0.1):
    positive = x.data > 0

    def backward(grad):
        return (np.where(positive, grad, slope * grad),)

    return record(np.where(positive, x.data, slope * x.data), (x,), backward)


def sigmoid(x):
    out = _stable_sigmoid(x.data)

    def backward(grad):
        return (grad * out * (1 - out),)

    return record(out, (x,), backward)


def _stable_sigmoid(values):
    # exp is only ever evaluated on non-positive numbers.
    exp_neg_abs = np.exp(-np.abs(values))
    return np.where(values >= 0, 1 / (1 + exp_neg_abs), exp_neg_abs / (1 + exp_neg_abs))


def softmax(x):
    """
    Softmax over the last axis.
    """
    shifted = x.data - np.max(x.data, axis=-1, keepdims=True)
    exps = np.exp(shifted)
    out = exps / np.sum(exps, axis=-1, keepdims=True)

    def backward(grad):
        return (out * (grad - np.sum(grad * out, axis=-1, keepdims=True)),)

    return record(out, (x,), backward)


def linear(x, weight, bias=None):
    """
    Affine map ``x @ weight.T + bias`` applied to the last axis.

    :param Tensor x: ``rows x in`` or ``in`` tensor.
    :param Tensor weight: ``out x in`` tensor.
    :param Tensor bias: ``out`` tensor, optional.
    """
    if weight.ndim != 2 or x.shape[-1] != weight.shape[1]:
        raise ConfigurationError(
            f"Linear layer expects {weight.shape[1] if weight.ndim == 2 else '?'} input "
            f"features, got input of shape {x.shape}."
        )
    if bias is not None and bias.shape != (weight.shape[0],):
        raise ConfigurationError(f"Bias of shape {bias.shape} doesn't match {weight.shape}.")

    data = x.data @ weight.data.T
    if bias is not None:
        data = data + bias.data

    def backward(grad):
        rows = grad.reshape(-1, weight.shape[0])
        inputs = x.data.reshape(-1, weight.shape[1])
        grads = (grad @ weight.data, rows.T @ inputs)
        if bias is not None:
            grads += (rows.sum(axis=0),)
        return grads

    inputs = (x, weight) if bias is None else (x, weight, bias)
    return record(data, inputs, backward)


def embedding(table, ids):
    """
    Look up rows of a table.

    :param Tensor table: ``entries x dim`` tensor.
    :param ids: Integer indices.

    :returns: ``len(ids) x dim`` tensor.
    """
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise ConfigurationError(
            f"Embedding index out of range [0, {table.shape[0]}): {ids.min()}..{ids.max()}."
        )

    def backward(grad):
        table_grad = np.zeros_like(table.data)
        np.add.at(table_grad, ids, grad)
        return (table_grad,)

    return record(table.data[ids], (table,), backward)


def dropout(x, p, rng, training=True):
    """
    Zero each element with probability ``p`` and scale the others by ``1 / (1 - p)``.

    :param Tensor x: Input.
    :param float p: Drop probability.
    :param numpy.random.Generator rng: Source of the mask.
    :param bool training: Dropout is the identity when False.
    """
    if not training or p == 0:
        return x
    if not 0 <= p < 1:
        raise ConfigurationError(f"Dropout probability must be in [0, 1), got {p}.")
    mask = (rng.random(x.shape) >= p).astype(x.dtype) / (1 - p)
    return apply_mask(x, mask)


def apply_mask(x, mask):
    """
    Element-wise product with a constant mask.
    """

    def backward(grad):
        return (grad * mask,)

    return record(x.data * mask, (x,), backward)


def conv1d(x, weight, bias=None):
    """
    One dimensional convolution along time with zero "same" padding.

    Computes ``out[t, o] = bias[o] + sum_c sum_j xpad[t + j, c] * weight[o, c, j]`` where
    ``xpad`` is ``x`` padded with ``(k - 1) / 2`` zero frames on each side, so the output
    has as many frames as the input.

    :param Tensor x: ``time x ch_in`` tensor.
    :param Tensor weight: ``ch_out x ch_in x k`` tensor, ``k`` odd.
    :param Tensor bias: ``ch_out`` tensor, optional.

    :returns: ``time x ch_out`` tensor.
    """
    if x.ndim != 2 or weight.ndim != 3:
        raise ConfigurationError(
            f"conv1d expects a time x channels input and a 3-D kernel, got {x.shape} and "
            f"{weight.shape}."
        )
    ch_out, ch_in, k = weight.shape
    if k % 2 == 0:
        raise ConfigurationError(f"conv1d kernel size must be odd, got {k}.")
    if x.shape[1] != ch_in:
        raise ConfigurationError(f"conv1d expects {ch_in} input channels, got {x.shape[1]}.")
    if bias is not None and bias.shape != (ch_out,):
        raise ConfigurationError(f"conv1d bias of shape {bias.shape}, expected ({ch_out},).")

    frames = x.shape[0]
    pad = (k - 1) // 2
    padded = np.pad(x.data, ((pad, pad), (0, 0)))
    # frames x ch_in x k, flattened in the same order as the kernel.
    columns = sliding_window_view(padded, k, axis=0).reshape(frames, ch_in * k)
    kernel = weight.data.reshape(ch_out, ch_in * k)
    data = columns @ kernel.T
    if bias is not None:
        data = data + bias.data

    def backward(grad):
        weight_grad = (grad.T @ columns).reshape(weight.shape)
        column_grad = (grad @ kernel).reshape(frames, ch_in, k)
        padded_grad = np.zeros_like(padded)
        for j in range(k):
            padded_grad[j : j + frames] += column_grad[:, :, j]
        grads = (padded_grad[pad : pad + frames], weight_grad)
        if bias is not None:
            grads += (grad.sum(axis=0),)
        return grads

    inputs = (x, weight) if bias is None else (x, weight, bias)
    return record(data, inputs, backward)


def segment_table(boundaries, frames=None):
    """
    Validate phoneme boundaries.

    :param boundaries: Sequence of ``(start, end)`` frame ranges.
    :param int frames: Number of frames the boundaries must tile. Optional.

    :returns: ``numpy`` array of starts and array of lengths.

    :raises ConfigurationError: If a segment is empty, or segments overlap, leave gaps,
        or don't cover ``[0, frames)``.
    """
    table = np.asarray(boundaries, dtype=np.int64).reshape(-1, 2)
    if len(table) == 0:
        raise ConfigurationError("At least one segment is required.")
    starts, ends = table[:, 0], table[:, 1]
    if np.any(ends <= starts):
        index = int(np.argmax(ends <= starts))
        raise ConfigurationError(f"Segment {index} ({starts[index]}, {ends[index]}) is empty.")
    if starts[0] != 0 or np.any(starts[1:] != ends[:-1]):
        raise ConfigurationError("Segments must be sorted, start at frame 0 and leave no gaps.")
    if frames is not None and ends[-1] != frames:
        raise ConfigurationError(f"Segments cover {ends[-1]} frames, expected {frames}.")
    return starts, ends - starts


def avg_pool_segments(x, boundaries):
    """
    Average the frames of each segment.

    :param Tensor x: ``time x ch`` tensor.
    :param boundaries: ``(start, end)`` ranges tiling ``[0, time)``.

    :returns: ``segments x ch`` tensor.
    """
    starts, lengths = segment_table(boundaries, x.shape[0])
    scale = (1.0 / lengths).astype(x.dtype)[:, None]
    data = np.add.reduceat(x.data, starts, axis=0) * scale

    def backward(grad):
        return (np.repeat(grad * scale, lengths, axis=0),)

    return record(data, (x,), backward)


def expand_segments(x, durations):
    """
    Repeat row ``i`` of ``x`` ``durations[i]`` times.

    :param Tensor x: ``segments x ch`` tensor.
    :param durations: Frame count of every segment.

    :returns: ``sum(durations) x ch`` tensor.
    """
    durations = np.asarray(durations, dtype=np.int64)
    if durations.shape != (x.shape[0],):
        raise ConfigurationError(
            f"Got {durations.size} durations for {x.shape[0]} rows to expand."
        )
    if np.any(durations < 1):
        raise ConfigurationError("Durations must be at least one frame.")
    starts = np.concatenate([[0], np.cumsum(durations)[:-1]])

    def backward(grad):
        return (np.add.reduceat(grad, starts, axis=0),)

    return record(np.repeat(x.data, durations, axis=0), (x,), backward)


def global_avg_pool(x):
    """
    Average over time.

    :param Tensor x: ``time x ch`` tensor.

    :returns: ``ch`` tensor.
    """
    frames = x.shape[0]

    def backward(grad):
        return (np.broadcast_to(grad / frames, x.shape).copy(),)

    return record(x.data.mean(axis=0), (x,), backward)


def center_time(x):
    """
    Subtract from every channel its average over time.

    :param Tensor x: ``time x ch`` tensor.

    :returns: ``time x ch`` tensor.
    """
    x = as_tensor(x)

    def backward(grad):
        return (grad - grad.mean(axis=0, keepdims=True),)

    return record(x.data - x.data.mean(axis=0, keepdims=True), (x,), backward)
