# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.errors import ConfigurationError
from casein.numerics.tensor import as_tensor, check_finite, record


def _check_same_shape(pred, target, what):
    if pred.shape != target.shape:
        raise ConfigurationError(
            f"{what}: prediction of shape {pred.shape} doesn't match target of shape "
            f"{target.shape}."
        )


def mean_row_distance(pred, target):
    """
    Mean, over rows, of the Euclidean distance between matching rows.

    The target is treated as a constant: no gradient flows into it.

    :param Tensor pred: ``rows x features`` tensor. A 1-D tensor is a single row.
    :param target: Tensor or array with the same shape.

    :returns: Scalar tensor.
    """
    target = as_tensor(target)
    _check_same_shape(pred, target, "Row distance")
    shape = pred.shape
    diff = (pred.data - target.data).reshape(-1, shape[-1] if shape else 1)
    norms = np.sqrt(np.sum(diff * diff, axis=1))
    rows = len(norms)

    def backward(grad):
        # The norm is not differentiable at zero; use the zero subgradient there.
        safe = np.where(norms > 0, norms, 1)
        scale = np.where(norms > 0, grad / (safe * rows), 0).astype(diff.dtype)
        return ((diff * scale[:, None]).reshape(shape),)

    loss = record(np.mean(norms), (pred,), backward)
    check_finite(loss, "row distance loss")
    return loss


def mse_loss(pred, target):
    """
    Spectrogram reconstruction loss: mean over frames of the L2 norm of the per-frame
    difference. Zero if and only if both spectrograms are identical.

    :param Tensor pred: ``frames x channels`` prediction.
    :param target: ``frames x channels`` target, never differentiated.

    :returns: Scalar tensor.
    """
    return mean_row_distance(pred, target)


def squared_error(pred, target):
    """
    Mean of the squared element-wise difference. The target is a constant.

    Used for the codebook and commitment terms of the quantizer, where the caller decides
    which side is detached.
    """
    target = as_tensor(target)
    _check_same_shape(pred, target, "Squared error")
    diff = pred.data - target.data
    count = diff.size

    def backward(grad):
        return (diff * (2 * grad / count),)

    return record(np.mean(diff * diff), (pred,), backward)


def bce_elementwise(logits, labels):
    """
    Element-wise binary cross-entropy on logits, averaged over every element.

    Evaluated as ``max(x, 0) - x * y + log(1 + exp(-|x|))`` so large logits never
    overflow.

    :param Tensor logits: Logits of any shape.
    :param labels: 0/1 labels of the same shape.

    :returns: Scalar tensor.

    :raises ConfigurationError: If a label is not 0 or 1.
    """
    labels = np.asarray(labels.data if hasattr(labels, "data") else labels)
    if labels.shape != logits.shape:
        raise ConfigurationError(
            f"BCE: logits of shape {logits.shape} don't match labels of shape {labels.shape}."
        )
    if not np.all((labels == 0) | (labels == 1)):
        raise ConfigurationError("BCE labels must be 0 or 1.")

    x = logits.data
    y = labels.astype(x.dtype)
    count = x.size
    losses = np.maximum(x, 0) - x * y + np.log1p(np.exp(-np.abs(x)))

    def backward(grad):
        exp_neg_abs = np.exp(-np.abs(x))
        probabilities = np.where(x >= 0, 1 / (1 + exp_neg_abs), exp_neg_abs / (1 + exp_neg_abs))
        return ((probabilities - y) * (grad / count),)

    loss = record(np.mean(losses), (logits,), backward)
    check_finite(loss, "binary cross-entropy loss")
    return loss
