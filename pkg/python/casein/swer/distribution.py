# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import csv
import io

import numpy as np

from casein.corpus.emotion import Emotion
from casein.errors import ConfigurationError
from casein.storage import atomic_write
from casein.swer.windows import slice_windows


class EmotionDistribution:
    """
    Probability of every emotion on every phoneme, a ``t x n`` matrix with entries in
    ``[0, 1]``.

    Rows don't have to sum to 1: emotions are scored independently, which is what lets
    several of them be present at once.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=np.float32)
        if matrix.ndim != 2 or matrix.shape[0] == 0:
            raise ConfigurationError(
                f"An emotion distribution is a phonemes x emotions matrix, got {matrix.shape}."
            )
        if not 2 <= matrix.shape[1] <= len(Emotion):
            raise ConfigurationError(f"Unsupported number of emotions: {matrix.shape[1]}.")
        if np.any(~np.isfinite(matrix)) or np.any(matrix < 0) or np.any(matrix > 1):
            raise ConfigurationError("Emotion probabilities must be in [0, 1].")
        self._matrix = matrix

    @property
    def matrix(self):
        return self._matrix

    @property
    def emotions(self):
        return [Emotion(index) for index in range(self._matrix.shape[1])]

    def __len__(self):
        return self._matrix.shape[0]

    def column(self, emotion):
        return self._matrix[:, int(emotion)]

    def to_csv(self):
        """
        :returns: The matrix as CSV text, one row per phoneme.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["phoneme"] + [f"{emotion}" for emotion in self.emotions])
        for index, row in enumerate(self._matrix):
            writer.writerow([index] + [repr(float(value)) for value in row])
        return buffer.getvalue()

    def save_csv(self, path):
        atomic_write(path, self.to_csv())


def predict_distribution(mel, boundaries, model):
    """
    Apply the emotion recognizer to the window of every phoneme.

    :param numpy.ndarray mel: ``frames x channels`` spectrogram.
    :param boundaries: ``(start, end)`` frame range of every phoneme.
    :param casein.swer.PredD model: Trained recognizer. Run in inference mode.

    :returns: :class:`EmotionDistribution`.
    """
    training = model.training
    model.eval()
    try:
        rows = [
            model.probabilities(window.frames).data
            for window in slice_windows(mel, boundaries, model.radius)
        ]
    finally:
        model.train(training)
    return EmotionDistribution(np.stack(rows))
