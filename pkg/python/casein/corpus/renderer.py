# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

"""
Synthetic spectrogram renderer.

Channels ``[0, formant_channels)`` hold the phoneme envelopes: two Gaussian bumps per
phoneme, on top of a low floor. The channels above hold a flat floor where every emotion
owns a band. An emotion is a sinusoid along time, restarted at every phoneme, multiplying
its band and scaled by the intensity of the phoneme. A speaker tilts the whole spectrum
with a linear ramp.
"""

import numpy as np

from casein.corpus.emotion import Emotion
from casein.errors import ConfigurationError
from casein.numerics.functional import segment_table


FORMANT_FLOOR = 0.1
BAND_FLOOR = 0.45
MAIN_BUMP_HEIGHT = 0.6
SECOND_BUMP_HEIGHT = 0.3
MAX_TILT_SLOPE = 0.1
# Fractional part of the golden ratio. Spreads speaker slopes without collisions.
_GOLDEN = 0.6180339887498949


class Renderer:
    """
    Renders neutral spectrograms and adds emotions to them.

    Every parameter of the rendering is a deterministic function of the corpus
    configuration, the phoneme ids and the speaker id. Only the noise is random.
    """

    def __init__(self, config):
        """
        :param casein.config.CorpusConfig config: Corpus configuration.
        """
        self._config = config
        ids = np.arange(config.vocab)
        formants = config.formant_channels
        self._main_centers = np.minimum(
            np.floor((ids + 0.5) * formants / config.vocab), formants - 1
        ).astype(np.int64)
        self._second_centers = (self._main_centers + formants // 2) % formants
        self._main_widths = 1.5 + 0.5 * (ids % 3)
        self._second_widths = 2.0 + 0.5 * (ids % 2)

    @property
    def config(self):
        return self._config

    @property
    def emotions(self):
        """
        Emotions of the corpus, Neutral included.
        """
        return [Emotion(index) for index in range(self._config.emotions)]

    def main_center(self, phoneme_id):
        """
        Channel of the tallest bump of a phoneme's envelope.
        """
        return int(self._main_centers[phoneme_id])

    def phoneme_envelope(self, phoneme_id):
        """
        :returns: Envelope of a phoneme over the formant channels, without the floor.
        """
        if not 0 <= phoneme_id < self._config.vocab:
            raise ConfigurationError(
                f"Phoneme id {phoneme_id} is out of range [0, {self._config.vocab})."
            )
        channels = np.arange(self._config.formant_channels)

        def bump(center, width):
            return np.exp(-0.5 * ((channels - center) / width) ** 2)

        return MAIN_BUMP_HEIGHT * bump(
            self._main_centers[phoneme_id], self._main_widths[phoneme_id]
        ) + SECOND_BUMP_HEIGHT * bump(
            self._second_centers[phoneme_id], self._second_widths[phoneme_id]
        )

    def speaker_slope(self, speaker_id):
        if speaker_id < 0:
            raise ConfigurationError(f"Speaker id {speaker_id} can't be negative.")
        return MAX_TILT_SLOPE * ((speaker_id * _GOLDEN) % 1.0 - 0.5)

    def speaker_tilt(self, speaker_id):
        """
        :returns: Linear ramp across channels added to every frame of a speaker.
        """
        channels = self._config.channels
        ramp = np.arange(channels) / max(channels - 1, 1) - 0.5
        return self.speaker_slope(speaker_id) * ramp

    def render_neutral(self, phonemes, speaker_id, seed=None, noise=None):
        """
        Render an emotion-free spectrogram.

        :param PhonemeSequence phonemes: Phonemes to render.
        :param int speaker_id: Speaker of the utterance.
        :param seed: Seed or ``numpy.random.Generator`` of the noise.
        :param float noise: Standard deviation of the noise. Defaults to the configured one.

        :returns: ``frames x channels`` ``numpy.float32`` matrix with values in ``[0, 1]``.
        """
        config = self._config
        phonemes.check_vocabulary(config.vocab)
        if speaker_id >= config.speakers:
            raise ConfigurationError(
                f"Speaker id {speaker_id} is out of range [0, {config.speakers})."
            )
        noise = config.noise if noise is None else noise

        frames = np.full((len(phonemes), config.channels), BAND_FLOOR)
        frames[:, : config.formant_channels] = FORMANT_FLOOR
        for row, phoneme_id in enumerate(phonemes.ids):
            frames[row, : config.formant_channels] += self.phoneme_envelope(phoneme_id)
        mel = np.repeat(frames, phonemes.durations, axis=0) + self.speaker_tilt(speaker_id)
        if noise > 0:
            rng = np.random.default_rng(seed)
            mel = mel + rng.normal(0.0, noise, size=mel.shape)
        return np.clip(mel, 0.0, 1.0).astype(np.float32)

    def intensity_envelope(self, intensity, boundaries):
        """
        Per frame intensity.

        The intensity of every phoneme is reached at its central frame and interpolated
        linearly toward the neighbouring phonemes in between, so the envelope is
        continuous across phoneme boundaries. It is constant before the first and after
        the last central frame.

        :param intensity: One value in ``[0, 1]`` per phoneme.
        :param boundaries: ``(start, end)`` frame range of every phoneme.

        :returns: ``numpy`` vector with one value per frame.
        """
        starts, lengths = segment_table(boundaries)
        intensity = np.asarray(intensity, dtype=np.float64).reshape(-1)
        if len(intensity) != len(starts):
            raise ConfigurationError(
                f"Got {len(intensity)} intensities for {len(starts)} phonemes."
            )
        if np.any(intensity < 0) or np.any(intensity > 1):
            raise ConfigurationError("Intensities must be in [0, 1].")
        centers = starts + (lengths - 1) / 2
        return np.interp(np.arange(starts[-1] + lengths[-1]), centers, intensity)

    def carrier(self, emotion, boundaries):
        """
        Unit sinusoid of an emotion, restarted at the first frame of every phoneme.
        """
        starts, lengths = segment_table(boundaries)
        frames = starts[-1] + lengths[-1]
        offsets = np.arange(frames) - np.repeat(starts, lengths)
        return np.sin(2 * np.pi * self._config.frequency(emotion) * offsets)

    def modulation(self, emotion, intensity, boundaries):
        """
        Spectral modulation of an emotion.

        :returns: ``frames x channels`` matrix, zero outside the emotion's band.
        """
        emotion = Emotion(emotion)
        if emotion == Emotion.Neutral or emotion >= self._config.emotions:
            raise ConfigurationError(f"Emotion {int(emotion)} can't be applied to a spectrogram.")
        envelope = self.intensity_envelope(intensity, boundaries)
        wave = self._config.amplitude * envelope * self.carrier(emotion, boundaries)
        start, end = self._config.band(emotion)
        result = np.zeros((len(wave), self._config.channels))
        result[:, start:end] = wave[:, None]
        return result

    def apply_emotion(self, mel, emotion, intensity, boundaries):
        """
        Add an emotion to a spectrogram.

        :param numpy.ndarray mel: ``frames x channels`` spectrogram.
        :param int emotion: Emotion to add. Can't be Neutral.
        :param intensity: One intensity in ``[0, 1]`` per phoneme.
        :param boundaries: ``(start, end)`` frame range of every phoneme.

        :returns: New ``numpy.float32`` spectrogram.
        """
        return self.apply_mixture(mel, {emotion: intensity}, boundaries)

    def apply_mixture(self, mel, mixture, boundaries):
        """
        Add several emotions at once.

        :param numpy.ndarray mel: ``frames x channels`` spectrogram.
        :param dict mixture: Per phoneme intensities indexed by emotion.
        :param boundaries: ``(start, end)`` frame range of every phoneme.

        :returns: New ``numpy.float32`` spectrogram.
        """
        mel = np.asarray(mel)
        segment_table(boundaries, mel.shape[0])
        if mel.ndim != 2 or mel.shape[1] != self._config.channels:
            raise ConfigurationError(
                f"Expected a frames x {self._config.channels} spectrogram, got {mel.shape}."
            )
        total = mel.astype(np.float64)
        for emotion, intensity in mixture.items():
            total = total + self.modulation(emotion, intensity, boundaries)
        return np.clip(total, 0.0, 1.0).astype(np.float32)

    def reference_energy(self, emotion, duration):
        """
        Modulation energy of a phoneme of ``duration`` frames at full intensity: the
        variance along time of the emotion's scaled carrier.
        """
        wave = self._config.amplitude * self.carrier(emotion, [(0, duration)])
        return float(np.var(wave))
