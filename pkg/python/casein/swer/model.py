# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.numerics import Checkpoint
from casein.numerics import functional as F
from casein.numerics.layers import ConvPair, Linear, Module
from casein.numerics.tensor import as_tensor


class PredD(Module):
    """
    Emotion recognizer applied to a window of phonemes.

    Every channel of the window is first centered over time, so only how the channels
    move reaches ``conv -> leaky relu -> dropout -> conv``. An average over time and a
    linear layer then produce one logit per emotion. Emotions are scored independently:
    probabilities are the sigmoid of the logits, and they don't sum to 1.

    The last layer starts at zero, so every probability starts at 0.5.
    """

    kind = "swer"

    def __init__(self, config, corpus_config, seed=None):
        """
        :param casein.config.RunConfig config: Layer sizes and regularization.
        :param casein.config.CorpusConfig corpus_config: Spectrogram channels and number
            of emotions.
        :param int seed: Initialization seed. Defaults to the configured seed.
        """
        super().__init__()
        self._config = config
        self._corpus_config = corpus_config
        rng = np.random.default_rng([config.seed if seed is None else seed, 0])
        self.convs = ConvPair(
            corpus_config.channels,
            config.hidden,
            config.hidden,
            config.kernel,
            rng,
            config.dropout,
            config.leaky_slope,
        )
        self.classifier = Linear(config.hidden, corpus_config.emotions, rng, zero_init=True)

    @property
    def config(self):
        return self._config

    @property
    def corpus_config(self):
        return self._corpus_config

    @property
    def radius(self):
        return self._config.radius

    def forward(self, frames):
        """
        :param frames: ``frames x channels`` window.

        :returns: Tensor of one logit per emotion.
        """
        return self.classifier(F.global_avg_pool(self.convs(F.center_time(as_tensor(frames)))))

    def probabilities(self, frames):
        return F.sigmoid(self(frames))

    def to_checkpoint(self, metrics=None):
        checkpoint = Checkpoint.for_run(self.kind, self._config, self._corpus_config, metrics)
        checkpoint.add_module(self.kind, self)
        return checkpoint

    @classmethod
    def from_checkpoint(cls, checkpoint):
        model = cls(checkpoint.run_config(), checkpoint.corpus_config())
        checkpoint.load_module(cls.kind, model)
        return model.eval()

    @classmethod
    def load_from_disk(cls, path):
        return cls.from_checkpoint(Checkpoint.load_from_disk(path, cls.kind))
