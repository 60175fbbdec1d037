# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.corpus.emotion import Emotion
from casein.corpus.renderer import Renderer
from casein.errors import ConfigurationError
from casein.numerics.functional import segment_table


MAX_PROXY = 1.5


def intensity_proxy(mel, boundaries, emotion, renderer):
    """
    Measure the intensity of an emotion on every phoneme of a spectrogram.

    The modulation energy of a phoneme is the variance along time of the emotion's band,
    averaged over the band's channels. The expected noise energy is removed and the
    result compared to the energy of a full intensity phoneme of the same duration. The
    square root of that ratio is proportional to the intensity, up to ``MAX_PROXY``.
    Single frame phonemes carry no measurable modulation and measure 0.

    :param numpy.ndarray mel: ``frames x channels`` spectrogram.
    :param boundaries: ``(start, end)`` frame range of every phoneme.
    :param emotion: Emotion to measure. Can't be Neutral.
    :param renderer: :class:`Renderer` or :class:`CorpusConfig` of the corpus.

    :returns: ``numpy`` vector with one value per phoneme.
    """
    if not isinstance(renderer, Renderer):
        renderer = Renderer(renderer)
    config = renderer.config
    try:
        emotion = Emotion(int(emotion))
    except ValueError as e:
        raise ConfigurationError(f"Unknown emotion {emotion}.") from e
    if emotion == Emotion.Neutral or emotion >= config.emotions:
        raise ConfigurationError(f"The corpus has no band for {emotion}.")
    mel = np.asarray(mel, dtype=np.float64)
    starts, lengths = segment_table(boundaries, mel.shape[0])
    first, last = config.band(emotion)
    noise_energy = config.noise**2

    references = {}
    proxy = np.zeros(len(starts))
    for index, (start, length) in enumerate(zip(starts, lengths)):
        if length not in references:
            references[length] = renderer.reference_energy(emotion, length)
        reference = references[length]
        if reference <= 1e-12:
            continue
        band = mel[start : start + length, first:last]
        energy = float(np.mean(np.var(band, axis=0)))
        proxy[index] = np.sqrt(max(energy - noise_energy, 0.0) / reference)
    return np.clip(proxy, 0.0, MAX_PROXY)


def band_proxies(mel, boundaries, renderer):
    """
    :returns: Dictionary of the :func:`intensity_proxy` of every emotion but Neutral.
    """
    if not isinstance(renderer, Renderer):
        renderer = Renderer(renderer)
    return {
        emotion: intensity_proxy(mel, boundaries, emotion, renderer)
        for emotion in renderer.emotions
        if emotion != Emotion.Neutral
    }
