# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.manifold.codebook import Codebook, quantize
from casein.manifold.modules import (
    ConditionBundle,
    LinguisticExtractor,
    PredM,
    SpeakerTable,
    VQDecoder,
)
from casein.numerics import Checkpoint
from casein.numerics import functional as F
from casein.numerics.layers import Module
from casein.numerics.losses import mse_loss, squared_error
from casein.numerics.tensor import as_tensor


class ManifoldModel(Module):
    """
    VQ-VAE learning the emotion manifold.

    The emotional spectrogram is encoded by :class:`PredM` into one latent per phoneme
    and quantized on the codebook. The decoder reconstructs the emotional spectrogram
    from the quantized latents, the linguistic features of the paired neutral
    spectrogram and the speaker embedding, so the codes only have to carry what the
    neutral rendering lacks: the emotion.
    """

    kind = "manifold"

    def __init__(self, config, corpus_config, seed=None):
        """
        :param casein.config.RunConfig config: Model sizes and regularization.
        :param casein.config.CorpusConfig corpus_config: Spectrogram channels and number
            of speakers.
        :param int seed: Initialization seed. Defaults to the configured seed.
        """
        super().__init__()
        self._config = config
        self._corpus_config = corpus_config
        rng = np.random.default_rng([config.seed if seed is None else seed, 0])
        channels, hidden, dim = corpus_config.channels, config.hidden, config.codebook_dim
        self.pred_m = PredM(
            channels, hidden, dim, config.kernel, rng, config.dropout, config.leaky_slope
        )
        self.extractor = LinguisticExtractor(
            channels, hidden, config.kernel, rng, config.leaky_slope
        )
        self.speakers = SpeakerTable(corpus_config.speakers, hidden, rng)
        self.codebook = Codebook(config.codebook_size, dim, rng)
        self.decoder = VQDecoder(
            dim,
            hidden,
            channels,
            config.kernel,
            rng,
            config.residual_blocks,
            config.dropout,
            config.leaky_slope,
        )

    @property
    def config(self):
        return self._config

    @property
    def corpus_config(self):
        return self._corpus_config

    def encode(self, mel_emotional, boundaries):
        """
        :returns: ``t x d`` continuous latents of a spectrogram.
        """
        return self.pred_m(as_tensor(mel_emotional), boundaries)

    def latents(self, mel_emotional, boundaries):
        """
        Encode and quantize a spectrogram.

        :returns: :class:`ManifoldLatents`.
        """
        return quantize(self.encode(mel_emotional, boundaries), self.codebook)

    def condition(self, mel_neutral, boundaries, speaker_id):
        """
        :returns: :class:`ConditionBundle` of an utterance.
        """
        linguistic = self.extractor(as_tensor(mel_neutral), boundaries)
        return ConditionBundle(linguistic, self.speakers(speaker_id, linguistic.shape[0]))

    def forward(self, mel_emotional, mel_neutral, phonemes, speaker_id, quantizer=quantize):
        """
        Reconstruct an emotional spectrogram.

        :param mel_emotional: ``frames x channels`` spectrogram to encode.
        :param mel_neutral: Paired neutral spectrogram.
        :param PhonemeSequence phonemes: Phonemes and durations of the pair.
        :param int speaker_id: Speaker of the pair.
        :param callable quantizer: Maps continuous latents and the codebook to
            :class:`ManifoldLatents`.

        :returns: Tuple of the ``frames x channels`` reconstruction and the latents.
        """
        boundaries = phonemes.boundaries
        latents = quantizer(self.encode(mel_emotional, boundaries), self.codebook)
        if self.training:
            self.codebook.record_usage(latents.indices)
        condition = self.condition(mel_neutral, boundaries, speaker_id)
        return self.decoder(latents.quantized, condition, phonemes.durations), latents

    def loss(self, pair, quantizer=quantize):
        """
        Reconstruction loss of a pair with the codebook and commitment terms.

        :returns: Tuple of the total loss and a dictionary of its parts, with the latents
            under ``latents``.
        """
        decoded, latents = self(
            pair.mel_emotional, pair.mel_neutral, pair.phonemes, pair.speaker_id, quantizer
        )
        reconstruction = mse_loss(decoded, pair.mel_emotional)
        codebook = squared_error(latents.codes, F.stop_gradient(latents.pre_quant))
        commitment = squared_error(latents.pre_quant, F.stop_gradient(latents.codes))
        total = reconstruction + codebook + self._config.commitment * commitment
        return total, {
            "reconstruction": reconstruction,
            "codebook": codebook,
            "commitment": commitment,
            "latents": latents,
        }

    def to_checkpoint(self, metrics=None):
        checkpoint = Checkpoint.for_run(self.kind, self._config, self._corpus_config, metrics)
        checkpoint.add_module(self.kind, self)
        checkpoint.tensors["usage"] = self.codebook.usage.astype(np.float32)
        return checkpoint

    @classmethod
    def from_checkpoint(cls, checkpoint):
        """
        Rebuild a model saved with :meth:`to_checkpoint`.
        """
        model = cls(checkpoint.run_config(), checkpoint.corpus_config())
        checkpoint.load_module(cls.kind, model)
        if "usage" in checkpoint.tensors:
            model.codebook.usage = checkpoint.tensors["usage"]
        return model.eval()

    @classmethod
    def load_from_disk(cls, path):
        return cls.from_checkpoint(Checkpoint.load_from_disk(path, cls.kind))


def codebook_usage(model, pairs):
    """
    Count how many phonemes of the given pairs are assigned to every code.

    :returns: ``numpy`` vector of counts, one per code.
    """
    counts = np.zeros(model.codebook.size, dtype=np.int64)
    training = model.training
    model.eval()
    try:
        for pair in pairs:
            latents = model.latents(pair.mel_emotional, pair.boundaries)
            np.add.at(counts, latents.indices, 1)
    finally:
        model.train(training)
    return counts
