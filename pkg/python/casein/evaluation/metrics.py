# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import math

import numpy as np
import scipy.fft
import scipy.stats

from casein.errors import ConfigurationError


LOG_FLOOR = 1e-5
CEPSTRAL_ORDER = 13
# 10 / ln(10) * sqrt(2)
_MCD_SCALE = 10.0 / math.log(10.0) * math.sqrt(2.0)


def cepstra(mel, order=CEPSTRAL_ORDER):
    """
    Cepstral coefficients ``1`` to ``order`` of every frame of a spectrogram, from the
    orthonormal DCT-II of its log.

    :param numpy.ndarray mel: ``frames x channels`` spectrogram.
    :param int order: Number of coefficients. The 0th coefficient is left out.

    :returns: ``frames x order`` ``numpy.float64`` matrix.
    """
    mel = np.asarray(mel, dtype=np.float64)
    if mel.ndim != 2:
        raise ConfigurationError(f"Expected a frames x channels spectrogram, got {mel.shape}.")
    if not 0 < order < mel.shape[1]:
        raise ConfigurationError(
            f"Can't keep {order} cepstral coefficients out of {mel.shape[1]} channels."
        )
    coefficients = scipy.fft.dct(np.log(np.maximum(mel, LOG_FLOOR)), type=2, norm="ortho", axis=1)
    return coefficients[:, 1 : order + 1]


def mcd(mel_a, mel_b, order=CEPSTRAL_ORDER):
    """
    Mean cepstral distortion between two aligned spectrograms, in dB.

    :raises ConfigurationError: If the spectrograms don't have the same shape. They are
        never time aligned.
    """
    mel_a = np.asarray(mel_a)
    mel_b = np.asarray(mel_b)
    if mel_a.shape != mel_b.shape:
        raise ConfigurationError(
            f"MCD needs aligned spectrograms, got {mel_a.shape} and {mel_b.shape}."
        )
    if mel_a.shape[0] == 0:
        raise ConfigurationError("MCD of empty spectrograms is undefined.")
    difference = cepstra(mel_a, order) - cepstra(mel_b, order)
    return float(_MCD_SCALE * np.mean(np.sqrt(np.sum(difference * difference, axis=1))))


class Correlation:
    """
    Pearson and Spearman correlations of two series. Both are ``nan`` and ``defined`` is
    ``False`` when either series is constant.
    """

    __slots__ = ("pearson", "spearman", "defined")

    def __init__(self, pearson, spearman, defined=True):
        self.pearson = pearson
        self.spearman = spearman
        self.defined = defined

    def __iter__(self):
        return iter((self.pearson, self.spearman))

    def __repr__(self):
        return f"<Correlation pearson={self.pearson} spearman={self.spearman}>"


def correlations(a, b):
    """
    :returns: :class:`Correlation` of two series of the same length.

    :raises ConfigurationError: If the lengths differ or there are less than 3 values.
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if len(a) != len(b):
        raise ConfigurationError(f"Can't correlate series of lengths {len(a)} and {len(b)}.")
    if len(a) < 3:
        raise ConfigurationError("Correlations need at least 3 values.")
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        return Correlation(math.nan, math.nan, False)
    pearson = scipy.stats.pearsonr(a, b)[0]
    spearman = scipy.stats.spearmanr(a, b)[0]
    return Correlation(float(pearson), float(spearman))
