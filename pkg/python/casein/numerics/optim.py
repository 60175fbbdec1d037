# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.errors import ConfigurationError, DivergenceError


class AdamState:
    """
    Moments and step counter of the Adam optimizer.

    Moments are kept in 64-bit precision, one pair per parameter.
    """

    __slots__ = ("m", "v", "step", "lr", "beta1", "beta2", "epsilon")

    def __init__(self, params, lr=5e-4, beta1=0.9, beta2=0.98, epsilon=1e-8):
        """
        :param list params: Parameters the state is created for.
        :param float lr: Learning rate.
        :param float beta1: Decay rate of the first moment.
        :param float beta2: Decay rate of the second moment.
        :param float epsilon: Term added to the denominator.
        """
        self.m = [np.zeros(p.shape, dtype=np.float64) for p in params]
        self.v = [np.zeros(p.shape, dtype=np.float64) for p in params]
        self.step = 0
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon


def adam_step(params, state):
    """
    Apply one Adam update, with bias correction, to every parameter.

    Parameters without a gradient are updated as if their gradient was zero.

    :param list params: Parameters to update, in the order the state was created with.
    :param AdamState state: Optimizer state. Updated in place.

    :raises DivergenceError: If a gradient is not finite. Neither the parameters nor the
        state are modified in that case.
    """
    if len(params) != len(state.m):
        raise ConfigurationError(
            f"Optimizer state tracks {len(state.m)} parameters, got {len(params)}."
        )
    for index, p in enumerate(params):
        if p.shape != state.m[index].shape:
            raise ConfigurationError(
                f"Parameter {p.name or index} has shape {p.shape}, state expects "
                f"{state.m[index].shape}."
            )
        if p.grad is not None and not np.all(np.isfinite(p.grad)):
            raise DivergenceError(
                f"Non-finite gradient for parameter {p.name or index}; "
                f"step {state.step + 1} skipped."
            )

    state.step += 1
    bias_1 = 1 - state.beta1 ** state.step
    bias_2 = 1 - state.beta2 ** state.step
    for p, m, v in zip(params, state.m, state.v):
        grad = np.zeros(p.shape) if p.grad is None else p.grad.astype(np.float64)
        m *= state.beta1
        m += (1 - state.beta1) * grad
        v *= state.beta2
        v += (1 - state.beta2) * grad * grad
        update = state.lr * (m / bias_1) / (np.sqrt(v / bias_2) + state.epsilon)
        p.data = p.data.astype(np.float64) - update


def lr_linear_decay(epoch, max_epochs, lr_max):
    """
    Learning rate decaying linearly from ``lr_max`` at epoch 0 to 0 at ``max_epochs``.

    :param int epoch: Current epoch.
    :param int max_epochs: Epoch at which the rate reaches 0.
    :param float lr_max: Initial learning rate.

    :returns: The learning rate. 0 past ``max_epochs``.
    """
    if epoch < 0 or max_epochs <= 0:
        raise ConfigurationError(f"Invalid epoch {epoch} of {max_epochs}.")
    if epoch >= max_epochs:
        return 0.0
    return lr_max * (1 - epoch / max_epochs)


class Adam:
    """
    Adam optimizer over a fixed list of parameters.
    """

    def __init__(self, params, lr=5e-4, betas=(0.9, 0.98), epsilon=1e-8):
        """
        :param params: Iterable of parameters to optimize.
        :param float lr: Learning rate.
        :param tuple betas: Decay rates of the first and second moments.
        :param float epsilon: Term added to the denominator.
        """
        self._params = list(params)
        self._state = AdamState(self._params, lr, betas[0], betas[1], epsilon)

    @property
    def params(self):
        return self._params

    @property
    def state(self):
        return self._state

    @property
    def lr(self):
        """
        Current learning rate.
        """
        return self._state.lr

    @lr.setter
    def lr(self, lr):
        self._state.lr = lr

    def step(self):
        """
        Update the parameters from their accumulated gradients.
        """
        adam_step(self._params, self._state)

    def zero_grad(self):
        """
        Drop the gradients of every parameter.
        """
        for p in self._params:
            p.zero_grad()
