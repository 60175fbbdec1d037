# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

from collections import OrderedDict

import numpy as np

from casein.errors import ConfigurationError
from casein.numerics import functional as F
from casein.numerics.tensor import Parameter


class Module:
    """
    Base class of every layer and model.

    Parameters and sub-modules are discovered from the instance attributes, in the order
    they were assigned, so parameter names and orders are stable across runs. Derived
    classes implement ``forward``.
    """

    def __init__(self):
        self._training = True

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)

    def forward(self, *args, **kwargs):
        raise NotImplementedError(f"{self.__class__.__name__} does not implement forward.")

    def _children(self):
        for name, value in vars(self).items():
            if isinstance(value, (Parameter, Module)):
                yield name, value
            elif isinstance(value, (list, tuple)):
                for index, item in enumerate(value):
                    if isinstance(item, (Parameter, Module)):
                        yield f"{name}.{index}", item

    def named_parameters(self, prefix=""):
        """
        :returns: Generator of ``(dotted name, Parameter)`` pairs.
        """
        for name, value in self._children():
            full_name = f"{prefix}{name}"
            if isinstance(value, Parameter):
                yield full_name, value
            else:
                yield from value.named_parameters(full_name + ".")

    def parameters(self):
        """
        :returns: List of the trainable parameters.
        """
        return [p for _, p in self.named_parameters() if p.requires_grad]

    def modules(self):
        yield self
        for _, value in self._children():
            if isinstance(value, Module):
                yield from value.modules()

    @property
    def training(self):
        """
        ``True`` in training mode. Dropout is only active in training mode.
        """
        return self._training

    def train(self, mode=True):
        for module in self.modules():
            module._training = mode
        return self

    def eval(self):
        return self.train(False)

    def freeze(self):
        """
        Stop gradients from flowing into the parameters and switch to inference mode.
        """
        for _, p in self.named_parameters():
            p.requires_grad = False
        return self.eval()

    def zero_grad(self):
        for _, p in self.named_parameters():
            p.zero_grad()

    def astype(self, dtype):
        """
        Convert every parameter in place. Used by the 64-bit gradient checks.
        """
        for _, p in self.named_parameters():
            p.astype(dtype)
        return self

    def state_dict(self, prefix=""):
        """
        :returns: Ordered dictionary of parameter values indexed by dotted name.
        """
        return OrderedDict((name, p.numpy()) for name, p in self.named_parameters(prefix))

    def load_state_dict(self, state, prefix=""):
        """
        Copy values into the parameters.

        :param dict state: Values indexed by dotted name.
        :param str prefix: Prefix of the names of this module inside ``state``.

        :raises ConfigurationError: If a parameter is missing or has another shape.
        """
        for name, p in self.named_parameters(prefix):
            if name not in state:
                raise ConfigurationError(f"Parameter '{name}' missing from the checkpoint.")
            p.data = state[name]


def _uniform(rng, bound, shape):
    return rng.uniform(-bound, bound, size=shape)


class Conv1d(Module):
    """
    Convolution along time with "same" zero padding.
    """

    def __init__(self, ch_in, ch_out, kernel, rng, zero_init=False):
        """
        :param int ch_in: Input channels.
        :param int ch_out: Output channels.
        :param int kernel: Kernel size. Must be odd.
        :param numpy.random.Generator rng: Initialization source.
        :param bool zero_init: If True, weights and bias start at zero.
        """
        super().__init__()
        if kernel % 2 == 0:
            raise ConfigurationError(f"Convolution kernel size must be odd, got {kernel}.")
        bound = 1 / np.sqrt(ch_in * kernel)
        if zero_init:
            self.weight = Parameter(np.zeros((ch_out, ch_in, kernel)))
            self.bias = Parameter(np.zeros(ch_out))
        else:
            self.weight = Parameter(_uniform(rng, bound, (ch_out, ch_in, kernel)))
            self.bias = Parameter(_uniform(rng, bound, ch_out))

    def forward(self, x):
        return F.conv1d(x, self.weight, self.bias)


class Linear(Module):
    def __init__(self, features_in, features_out, rng, zero_init=False):
        super().__init__()
        bound = 1 / np.sqrt(features_in)
        if zero_init:
            self.weight = Parameter(np.zeros((features_out, features_in)))
            self.bias = Parameter(np.zeros(features_out))
        else:
            self.weight = Parameter(_uniform(rng, bound, (features_out, features_in)))
            self.bias = Parameter(_uniform(rng, bound, features_out))

    def forward(self, x):
        return F.linear(x, self.weight, self.bias)


class Embedding(Module):
    def __init__(self, entries, dim, rng):
        super().__init__()
        self.table = Parameter(rng.normal(0, 1 / np.sqrt(dim), size=(entries, dim)))

    def forward(self, ids):
        return F.embedding(self.table, ids)


class Dropout(Module):
    """
    Dropout drawing its masks from the run's random stream. Identity in inference mode.
    """

    def __init__(self, p, rng):
        super().__init__()
        self._p = p
        self._rng = rng

    def forward(self, x):
        return F.dropout(x, self._p, self._rng, self.training)


class ConvPair(Module):
    """
    Two convolutions with a leaky ReLU and dropout in between:
    ``conv -> leaky relu -> dropout -> conv``.

    This is the building block of every predictor, extractor, generator and adapter.
    """

    def __init__(
        self, ch_in, hidden, ch_out, kernel, rng, dropout=0.0, slope=0.1, zero_init_last=False
    ):
        super().__init__()
        self.conv_1 = Conv1d(ch_in, hidden, kernel, rng)
        self.dropout = Dropout(dropout, rng)
        self.conv_2 = Conv1d(hidden, ch_out, kernel, rng, zero_init=zero_init_last)
        self._slope = slope

    def forward(self, x):
        hidden = F.leaky_relu(self.conv_1(x), self._slope)
        return self.conv_2(self.dropout(hidden))


class ResidualConvBlock(Module):
    """
    ``x + conv(dropout(leaky relu(conv(x))))`` with a constant channel count.
    """

    def __init__(self, channels, kernel, rng, dropout=0.0, slope=0.1):
        super().__init__()
        self.body = ConvPair(channels, channels, channels, kernel, rng, dropout, slope)

    def forward(self, x):
        return x + self.body(x)
