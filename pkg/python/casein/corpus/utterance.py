# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.corpus.emotion import Emotion, one_hot
from casein.errors import ConfigurationError


class UtterancePair:
    """
    Neutral and emotional renderings of the same phonemes by the same speaker.

    Both spectrograms share the phoneme boundaries. A Neutral pair has zero intensity
    everywhere and two identical spectrograms.
    """

    __slots__ = (
        "_name",
        "_phonemes",
        "_speaker_id",
        "_emotion",
        "_intensity",
        "_pattern",
        "_mel_neutral",
        "_mel_emotional",
    )

    def __init__(
        self,
        name,
        phonemes,
        speaker_id,
        emotion,
        intensity,
        mel_neutral,
        mel_emotional,
        pattern="none",
    ):
        """
        :param str name: Unique name of the utterance in its corpus, e.g. ``train-0003``.
        :param PhonemeSequence phonemes: Phonemes and durations.
        :param int speaker_id: Speaker id.
        :param int emotion: Emotion id. 0 is Neutral.
        :param intensity: Ground truth intensity of every phoneme.
        :param numpy.ndarray mel_neutral: ``frames x channels`` emotion-free spectrogram.
        :param numpy.ndarray mel_emotional: ``frames x channels`` emotional spectrogram.
        :param str pattern: Name of the intensity pattern the utterance was drawn with.

        :raises ConfigurationError: If the pair is inconsistent.
        """
        intensity = np.asarray(intensity, dtype=np.float32).reshape(-1)
        mel_neutral = np.asarray(mel_neutral, dtype=np.float32)
        mel_emotional = np.asarray(mel_emotional, dtype=np.float32)
        if len(intensity) != len(phonemes):
            raise ConfigurationError(
                f"{name}: {len(intensity)} intensities for {len(phonemes)} phonemes."
            )
        for mel in (mel_neutral, mel_emotional):
            if mel.ndim != 2 or mel.shape[0] != phonemes.frames:
                raise ConfigurationError(
                    f"{name}: spectrogram of shape {mel.shape} for {phonemes.frames} frames."
                )
        if mel_neutral.shape != mel_emotional.shape:
            raise ConfigurationError(f"{name}: paired spectrograms have different shapes.")
        if emotion == Emotion.Neutral and (
            np.any(intensity != 0) or not np.array_equal(mel_neutral, mel_emotional)
        ):
            raise ConfigurationError(f"{name}: a neutral pair must be left unmodified.")

        self._name = name
        self._phonemes = phonemes
        self._speaker_id = int(speaker_id)
        self._emotion = Emotion(emotion)
        self._intensity = intensity
        self._pattern = pattern
        self._mel_neutral = mel_neutral
        self._mel_emotional = mel_emotional

    @property
    def name(self):
        return self._name

    @property
    def phonemes(self):
        return self._phonemes

    @property
    def boundaries(self):
        return self._phonemes.boundaries

    @property
    def speaker_id(self):
        return self._speaker_id

    @property
    def emotion(self):
        return self._emotion

    @property
    def intensity(self):
        """
        Ground truth intensity of every phoneme, in ``[0, 1]``.
        """
        return self._intensity

    @property
    def pattern(self):
        return self._pattern

    @property
    def mel_neutral(self):
        return self._mel_neutral

    @property
    def mel_emotional(self):
        return self._mel_emotional

    def label(self, count):
        """
        :returns: One-hot emotion label of the utterance.
        """
        return one_hot(self._emotion, count)

    def __repr__(self):
        return (
            f"<UtterancePair {self._name} emotion={self._emotion} speaker={self._speaker_id} "
            f"phonemes={len(self._phonemes)} frames={self._phonemes.frames}>"
        )
