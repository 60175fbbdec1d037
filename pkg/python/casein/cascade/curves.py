# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

"""
Intensity curves commanded at inference.

A curve file has one line per emotion listing ``position=intensity`` anchors, where the
position is the fraction of the utterance, from 0 on the first phoneme to 1 on the last::

    # Happy rises while Sad fades.
    happy: 0.0=0.0, 1.0=1.0
    sad: 0.0=1.0, 1.0=0.0

A lone value, e.g. ``surprised: 0.45``, is a constant curve.
"""

from collections import OrderedDict

import numpy as np

from casein.corpus.emotion import Emotion
from casein.errors import ConfigurationError, DataError
from casein.swer.distribution import EmotionDistribution


class CurveSpec:
    """
    Per emotion intensity curves, linearly interpolated between anchors and constant
    beyond the first and last anchors.
    """

    __slots__ = ("_curves",)

    def __init__(self, curves=None):
        """
        :param dict curves: Lists of ``(position, intensity)`` anchors indexed by emotion.

        :raises ConfigurationError: If an anchor is out of ``[0, 1]``, positions are not
            strictly increasing, a curve is empty or Neutral is given a curve.
        """
        self._curves = OrderedDict()
        for emotion, anchors in (curves or {}).items():
            emotion = Emotion.from_name(emotion) if isinstance(emotion, str) else Emotion(emotion)
            if emotion == Emotion.Neutral:
                raise ConfigurationError("Neutral is derived from the other emotions.")
            anchors = [(float(position), float(value)) for position, value in anchors]
            if not anchors:
                raise ConfigurationError(f"The {emotion} curve has no anchor.")
            positions = np.array([position for position, _ in anchors])
            values = np.array([value for _, value in anchors])
            if np.any(np.diff(positions) <= 0):
                raise ConfigurationError(
                    f"Positions of the {emotion} curve must be strictly increasing."
                )
            if np.any((positions < 0) | (positions > 1) | (values < 0) | (values > 1)):
                raise ConfigurationError(f"Anchors of the {emotion} curve must be in [0, 1].")
            self._curves[emotion] = anchors

    @property
    def curves(self):
        return self._curves

    def __len__(self):
        return len(self._curves)

    @classmethod
    def constant(cls, **intensities):
        """
        Constant curves, e.g. ``CurveSpec.constant(happy=0.9, surprised=0.45)``.
        """
        return cls({name: [(0.0, value)] for name, value in intensities.items()})

    @classmethod
    def ramp(cls, emotion, first=0.0, last=1.0):
        """
        One emotion going from ``first`` on the first phoneme to ``last`` on the last.
        """
        return cls({emotion: [(0.0, first), (1.0, last)]})

    @classmethod
    def conversion(cls, source, target):
        """
        ``source`` fading from 100% to 0% while ``target`` rises from 0% to 100%.
        """
        return cls({source: [(0.0, 1.0), (1.0, 0.0)], target: [(0.0, 0.0), (1.0, 1.0)]})

    @classmethod
    def parse(cls, text, path=None):
        """
        Parse the curve file format.
        """
        where = f" in {path}" if path else ""
        curves = OrderedDict()
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            name, sep, anchors_text = line.partition(":")
            if not sep:
                raise ConfigurationError(f"Expected 'emotion: anchors'{where}, got '{line}'.")
            anchors = []
            try:
                for anchor in anchors_text.split(","):
                    position, sep, value = anchor.partition("=")
                    if sep:
                        anchors.append((float(position), float(value)))
                    else:
                        anchors.append((0.0, float(position)))
            except ValueError as e:
                raise ConfigurationError(f"Invalid anchor{where} on '{line}': {e}") from e
            curves[name.strip()] = anchors
        return cls(curves)

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise DataError(f"Could not read curves {path}: {e.strerror or e}") from e
        return cls.parse(text, path)

    def to_lines(self):
        """
        :returns: Dictionary of emotion names to the anchors in the file format.
        """
        return OrderedDict(
            (f"{emotion}", ", ".join(f"{p!r}={v!r}" for p, v in anchors))
            for emotion, anchors in self._curves.items()
        )

    def to_text(self):
        return "".join(f"{name}: {anchors}\n" for name, anchors in self.to_lines().items())

    def evaluate(self, emotion, count):
        """
        Intensity of an emotion on each of ``count`` phonemes. Phoneme ``i`` sits at
        position ``i / (count - 1)``. Emotions without a curve are 0.
        """
        if count < 1:
            raise ConfigurationError("Curves are evaluated on at least one phoneme.")
        emotion = Emotion(emotion)
        if emotion not in self._curves:
            return np.zeros(count)
        positions = np.linspace(0.0, 1.0, count) if count > 1 else np.zeros(1)
        anchors = self._curves[emotion]
        return np.interp(positions, [p for p, _ in anchors], [v for _, v in anchors])

    def distribution(self, count, emotions):
        """
        Emotion distribution commanded by the curves.

        The Neutral column is ``max(0, 1 - strongest emotional intensity)`` so that no
        curve at all commands neutral speech.

        :param int count: Number of phonemes.
        :param int emotions: Number of emotions of the model, Neutral included.

        :returns: :class:`EmotionDistribution`.
        """
        for emotion in self._curves:
            if emotion >= emotions:
                raise ConfigurationError(
                    f"The model knows {emotions} emotions, can't command {emotion}."
                )
        matrix = np.zeros((count, emotions))
        for index in range(1, emotions):
            matrix[:, index] = self.evaluate(index, count)
        matrix[:, Emotion.Neutral] = np.maximum(0.0, 1.0 - matrix[:, 1:].max(axis=1))
        return EmotionDistribution(matrix)


# Mixed emotions as weighted sums of basic ones.
RECIPES = OrderedDict(
    [
        ("proud", CurveSpec.constant(happy=0.9, surprised=0.45)),
        ("disappointed", CurveSpec.constant(sad=0.7, angry=0.64)),
        ("devastated", CurveSpec.constant(surprised=0.1, sad=0.93)),
    ]
)


def recipe(name):
    """
    :returns: The :class:`CurveSpec` of a named mixed emotion.
    """
    if name.lower() not in RECIPES:
        raise ConfigurationError(
            f"Unknown recipe '{name}'. Known recipes: {', '.join(RECIPES)}."
        )
    return RECIPES[name.lower()]
