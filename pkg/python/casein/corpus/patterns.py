# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.errors import ConfigurationError


def _linear(count, first, last):
    if count == 1:
        return np.array([last])
    return np.linspace(first, last, count)


def constant(count, rng):
    """
    Same intensity, drawn in ``[0.4, 1]``, on every phoneme.
    """
    return np.full(count, rng.uniform(0.4, 1.0))


def ramp_up(count, rng):
    """
    From 0 on the first phoneme to 1 on the last one.
    """
    return _linear(count, 0.0, 1.0)


def ramp_down(count, rng):
    return _linear(count, 1.0, 0.0)


def piecewise(count, rng):
    """
    Random number of constant runs, each with its own intensity drawn in ``[0.2, 1]``.
    """
    runs = int(rng.integers(1, min(count, 4) + 1))
    cuts = np.sort(rng.choice(np.arange(1, count), size=runs - 1, replace=False))
    levels = rng.uniform(0.2, 1.0, size=runs)
    return np.repeat(levels, np.diff(np.concatenate([[0], cuts, [count]])))


class PatternRegistry:
    """
    Registry of the intensity patterns emotional utterances are generated with.

    Allows to draw the per phoneme intensities of an utterance.
    """

    _pattern_registry = {
        "constant": constant,
        "ramp-up": ramp_up,
        "ramp-down": ramp_down,
        "piecewise": piecewise,
    }

    @classmethod
    def names(cls):
        return list(cls._pattern_registry)

    @classmethod
    def create_intensity(cls, name, count, rng):
        """
        Draw the intensities of an utterance.

        :param str name: Name of one of the registered patterns.
        :param int count: Number of phonemes.
        :param numpy.random.Generator rng: Random source.

        :returns: ``numpy`` vector of ``count`` values in ``[0, 1]``.
        """
        if name not in cls._pattern_registry:
            raise ConfigurationError(f"Intensity pattern {name} is not implemented.")
        if count < 1:
            raise ConfigurationError("An intensity pattern needs at least one phoneme.")
        return cls._pattern_registry[name](count, rng)
