# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import enum

import numpy as np

from casein.errors import ConfigurationError


class Emotion(enum.IntEnum):
    """
    Emotion categories of the corpus. Neutral is emotion-free speech.

    A corpus with ``n`` emotions uses the first ``n`` members.
    """

    Neutral = 0
    Happy = 1
    Sad = 2
    Angry = 3
    Surprised = 4

    @property
    def key(self):
        """
        Lower case name used in configuration keys and curve files.
        """
        return self.name.lower()

    @classmethod
    def from_name(cls, name):
        """
        Find an emotion from its name, case insensitive. ``surprise`` is accepted for
        ``Surprised``.

        :raises ConfigurationError: If the name is unknown.
        """
        lowered = name.strip().lower()
        if lowered == "surprise":
            lowered = "surprised"
        for emotion in cls:
            if emotion.key == lowered:
                return emotion
        raise ConfigurationError(f"Unknown emotion '{name}'.")

    def __format__(self, format_spec):
        """
        Format the value into a string.

        The format specifier does not do anything.

        :param str format_spec: Format specifier. Unused.
        """
        return self.key


def one_hot(emotion, count):
    """
    Emotion label of an utterance.

    :param int emotion: Emotion id in ``[0, count)``.
    :param int count: Number of emotions.

    :returns: ``numpy`` vector with a single 1.
    """
    if not 0 <= emotion < count:
        raise ConfigurationError(f"Emotion {emotion} is out of range [0, {count}).")
    label = np.zeros(count, dtype=np.float32)
    label[int(emotion)] = 1
    return label
