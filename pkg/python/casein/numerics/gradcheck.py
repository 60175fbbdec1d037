# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.numerics.tensor import Tape, shadow_precision


class GradcheckResult:
    """
    Outcome of a gradient check.
    """

    __slots__ = ("max_relative_error", "checked", "worst")

    def __init__(self, max_relative_error, checked, worst):
        """
        :param float max_relative_error: Largest relative error found.
        :param int checked: Number of elements compared.
        :param tuple worst: ``(tensor index, element index, analytic, numeric)`` of the
            largest error.
        """
        self.max_relative_error = max_relative_error
        self.checked = checked
        self.worst = worst

    def passed(self, tolerance=1e-3):
        return self.max_relative_error < tolerance

    def __repr__(self):
        return (
            f"<GradcheckResult max_relative_error={self.max_relative_error:.3g} "
            f"checked={self.checked} worst={self.worst}>"
        )


def gradcheck(function, tensors, h=1e-3, max_elements=None, rng=None, atol=1e-7):
    """
    Compare reverse-mode gradients with central finite differences.

    ``function`` is evaluated in 64-bit precision: the tensors are converted in place and
    every tensor created while it runs uses 64 bits. The caller converts any module the
    function uses with ``Module.astype``.

    :param callable function: Takes no argument and returns a scalar tensor computed from
        ``tensors``.
    :param list tensors: Leaf tensors to differentiate with respect to.
    :param float h: Finite difference step.
    :param int max_elements: If set, only this many randomly chosen elements of each tensor
        are perturbed.
    :param numpy.random.Generator rng: Source of the element choice.
    :param float atol: Absolute differences below this are never counted as errors.

    :returns: A :class:`GradcheckResult`.
    """
    rng = rng or np.random.default_rng(0)
    with shadow_precision():
        for tensor in tensors:
            tensor.astype(np.float64)
            tensor.requires_grad = True
            tensor.zero_grad()

        with Tape() as tape:
            loss = function()
        tape.backward(loss)
        analytic = [
            np.zeros(t.shape) if t.grad is None else t.grad.astype(np.float64) for t in tensors
        ]

        worst_error = 0.0
        worst = None
        checked = 0
        for tensor_index, tensor in enumerate(tensors):
            flat = tensor.data.reshape(-1)
            indices = np.arange(flat.size)
            if max_elements is not None and flat.size > max_elements:
                indices = np.sort(rng.choice(flat.size, size=max_elements, replace=False))
            for element in indices:
                original = flat[element]
                flat[element] = original + h
                plus = function().item()
                flat[element] = original - h
                minus = function().item()
                flat[element] = original

                numeric = (plus - minus) / (2 * h)
                exact = analytic[tensor_index].reshape(-1)[element]
                difference = abs(exact - numeric)
                error = 0.0
                if difference > atol:
                    error = difference / max(abs(exact), abs(numeric))
                if error > worst_error or worst is None:
                    worst_error = max(worst_error, error)
                    worst = (tensor_index, int(element), float(exact), float(numeric))
                checked += 1
    return GradcheckResult(worst_error, checked, worst)
