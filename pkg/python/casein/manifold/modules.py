# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.errors import ConfigurationError
from casein.numerics import functional as F
from casein.numerics.layers import ConvPair, Embedding, Linear, Module, ResidualConvBlock


class PredM(Module):
    """
    Manifold predictor: maps an emotional spectrogram to one continuous latent per
    phoneme.

    ``conv -> leaky relu -> dropout -> conv`` followed by duration pooling.
    """

    def __init__(self, channels, hidden, dim, kernel, rng, dropout=0.2, slope=0.1):
        super().__init__()
        self.convs = ConvPair(channels, hidden, dim, kernel, rng, dropout, slope)

    def forward(self, mel, boundaries):
        """
        :param Tensor mel: ``frames x channels`` emotional spectrogram.
        :param boundaries: ``(start, end)`` frame range of every phoneme.

        :returns: ``t x d`` tensor.
        """
        return F.avg_pool_segments(self.convs(mel), boundaries)


class LinguisticExtractor(Module):
    """
    Keeps what a neutral spectrogram says about pronunciation: ``conv -> leaky relu ->
    conv`` and an average over the frames of every phoneme.
    """

    def __init__(self, channels, hidden, kernel, rng, slope=0.1):
        super().__init__()
        self.convs = ConvPair(channels, hidden, hidden, kernel, rng, 0.0, slope)

    def forward(self, mel, boundaries):
        return F.avg_pool_segments(self.convs(mel), boundaries)


class SpeakerTable(Module):
    """
    One learned embedding per speaker.
    """

    def __init__(self, speakers, hidden, rng):
        super().__init__()
        self.embedding = Embedding(speakers, hidden, rng)

    def forward(self, speaker_id, count):
        """
        :returns: ``count x hidden`` tensor, the speaker's row repeated.
        """
        return self.embedding(np.full(count, speaker_id))


class ConditionBundle:
    """
    What the decoder is told besides the emotion manifold.

    ``speaker`` holds the speaker embedding repeated on every phoneme.
    """

    __slots__ = ("linguistic", "speaker")

    def __init__(self, linguistic, speaker):
        if linguistic.shape[0] != speaker.shape[0]:
            raise ConfigurationError(
                f"Linguistic features cover {linguistic.shape[0]} phonemes, speaker rows "
                f"{speaker.shape[0]}."
            )
        self.linguistic = linguistic
        self.speaker = speaker

    def __len__(self):
        return self.linguistic.shape[0]


class VQDecoder(Module):
    """
    Reconstructs the emotional spectrogram.

    Per phoneme, ``[quantized | linguistic | speaker]`` is projected to the hidden size,
    expanded to frames by the durations, sent through residual convolution blocks and
    projected to the spectrogram channels.
    """

    def __init__(
        self,
        dim,
        hidden,
        channels,
        kernel,
        rng,
        blocks=4,
        dropout=0.2,
        slope=0.1,
        zero_init_output=False,
    ):
        super().__init__()
        self.projection = Linear(dim + 2 * hidden, hidden, rng)
        self.blocks = [
            ResidualConvBlock(hidden, kernel, rng, dropout, slope) for _ in range(blocks)
        ]
        self.output = Linear(hidden, channels, rng, zero_init=zero_init_output)

    def forward(self, quantized, condition, durations):
        """
        :param Tensor quantized: ``t x d`` quantized latents.
        :param ConditionBundle condition: Condition of the same length.
        :param durations: Frame count of every phoneme.

        :returns: ``frames x channels`` tensor.
        """
        if quantized.shape[0] != len(condition) or len(durations) != len(condition):
            raise ConfigurationError(
                f"Decoder got {quantized.shape[0]} latents, {len(condition)} conditions and "
                f"{len(durations)} durations."
            )
        rows = F.concat([quantized, condition.linguistic, condition.speaker], axis=1)
        hidden = F.expand_segments(self.projection(rows), durations)
        for block in self.blocks:
            hidden = block(hidden)
        return self.output(hidden)
