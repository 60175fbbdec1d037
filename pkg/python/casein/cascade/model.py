# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.config import RunConfig
from casein.errors import ConfigurationError
from casein.manifold.codebook import quantize
from casein.manifold.model import ManifoldModel
from casein.numerics import Checkpoint
from casein.numerics import functional as F
from casein.numerics.layers import ConvPair, Embedding, Linear, Module, ResidualConvBlock
from casein.numerics.losses import mean_row_distance, mse_loss
from casein.numerics.tensor import as_tensor
from casein.swer.distribution import EmotionDistribution, predict_distribution
from casein.swer.model import PredD


class Generator(Module):
    """
    Maps an emotion distribution to continuous manifold latents, one per phoneme. The
    distribution is read as a sequence of phonemes with one channel per emotion.

    With ``zero_init``, the last convolution starts at zero, so every latent starts at the
    origin of the manifold.
    """

    def __init__(
        self, emotions, hidden, dim, kernel, rng, dropout=0.2, slope=0.1, zero_init=False
    ):
        super().__init__()
        self.convs = ConvPair(emotions, hidden, dim, kernel, rng, dropout, slope, zero_init)

    def forward(self, distribution):
        return self.convs(distribution)


class Adapter(Module):
    """
    Brings manifold codes to the hidden size of the synthesizer.
    """

    def __init__(self, dim, hidden, kernel, rng, dropout=0.2, slope=0.1):
        super().__init__()
        self.convs = ConvPair(dim, hidden, hidden, kernel, rng, dropout, slope)

    def forward(self, codes):
        return self.convs(codes)


class Synthesizer(Module):
    """
    Spectrogram synthesizer.

    Phoneme embeddings plus the adapted emotion rows plus the speaker embedding are
    expanded to frames by the durations, sent through residual convolution blocks and
    projected to the spectrogram channels.
    """

    def __init__(self, vocab, hidden, channels, kernel, rng, blocks=4, dropout=0.2, slope=0.1):
        super().__init__()
        self.phonemes = Embedding(vocab, hidden, rng)
        self.blocks = [
            ResidualConvBlock(hidden, kernel, rng, dropout, slope) for _ in range(blocks)
        ]
        self.output = Linear(hidden, channels, rng)

    def forward(self, phonemes, adapted, speaker):
        """
        :param PhonemeSequence phonemes: Phonemes and durations.
        :param Tensor adapted: ``t x hidden`` adapted emotion rows.
        :param Tensor speaker: ``t x hidden`` speaker rows.

        :returns: ``frames x channels`` tensor.
        """
        if adapted.shape[0] != len(phonemes) or speaker.shape[0] != len(phonemes):
            raise ConfigurationError(
                f"Synthesizer got {adapted.shape[0]} emotion rows for {len(phonemes)} phonemes."
            )
        rows = self.phonemes(phonemes.ids) + adapted + speaker
        hidden = F.expand_segments(rows, phonemes.durations)
        for block in self.blocks:
            hidden = block(hidden)
        return self.output(hidden)


class GeneratedManifold:
    """
    Output of the generator: continuous latents and their quantization.
    """

    __slots__ = ("pre_gen", "indices", "quantized")

    def __init__(self, pre_gen, indices, quantized):
        self.pre_gen = pre_gen
        self.indices = indices
        self.quantized = quantized


class FrozenTargets:
    """
    What the frozen models say about a training pair: the manifold codes of its
    emotional spectrogram and its emotion distribution.
    """

    __slots__ = ("codes", "distribution")

    def __init__(self, codes, distribution):
        self.codes = codes
        self.distribution = distribution


def loss_imp(pre_gen, codes):
    """
    Implicit control loss: mean over phonemes of the distance between the generated
    latents and the target codes. Gradients only flow into ``pre_gen``.

    :param Tensor pre_gen: ``t x d`` generated latents, before quantization.
    :param codes: ``t x d`` target code vectors.
    """
    codes = np.asarray(codes.data if hasattr(codes, "data") else codes)
    if codes.shape[0] != pre_gen.shape[0]:
        raise ConfigurationError(
            f"Generated latents cover {pre_gen.shape[0]} phonemes, targets {codes.shape[0]}."
        )
    return mean_row_distance(pre_gen, codes)


class CascadeModel(Module):
    """
    Controllable synthesizer.

    The emotion distribution goes through the generator, is quantized on the frozen
    codebook of the manifold, adapted and added to the synthesizer's phoneme embeddings.
    The manifold and the emotion recognizer are frozen and only used to build training
    targets, but are saved with the model so a checkpoint is self-contained.

    With ``explicit_only`` set, the generator and the codebook are bypassed: the adapter
    receives a linear projection of the distribution.
    """

    kind = "casein"

    def __init__(self, config, manifold, recognizer, seed=None):
        """
        :param casein.config.RunConfig config: Run configuration of the cascade.
        :param ManifoldModel manifold: Trained manifold. Frozen in place.
        :param PredD recognizer: Trained emotion recognizer. Frozen in place.
        :param int seed: Initialization seed. Defaults to the configured seed.
        """
        super().__init__()
        corpus_config = manifold.corpus_config
        if recognizer.corpus_config.emotions != corpus_config.emotions:
            raise ConfigurationError("The manifold and the recognizer use different corpora.")
        self._config = config
        self._corpus_config = corpus_config
        rng = np.random.default_rng([config.seed if seed is None else seed, 0])
        dim = manifold.codebook.dim
        self.manifold = manifold.freeze()
        self.recognizer = recognizer.freeze()
        if config.explicit_only:
            self.projection = Linear(corpus_config.emotions, dim, rng)
        else:
            self.generator = Generator(
                corpus_config.emotions,
                config.hidden,
                dim,
                config.kernel,
                rng,
                config.dropout,
                config.leaky_slope,
                config.zero_init_generator,
            )
        self.adapter = Adapter(
            dim, config.hidden, config.kernel, rng, config.dropout, config.leaky_slope
        )
        self.synthesizer = Synthesizer(
            corpus_config.vocab,
            config.hidden,
            corpus_config.channels,
            config.kernel,
            rng,
            config.residual_blocks,
            config.dropout,
            config.leaky_slope,
        )
        if self.manifold.config.hidden != config.hidden:
            raise ConfigurationError("The manifold and the cascade must share the hidden size.")

    @property
    def config(self):
        return self._config

    @property
    def corpus_config(self):
        return self._corpus_config

    @property
    def explicit_only(self):
        return self._config.explicit_only

    @property
    def codebook(self):
        return self.manifold.codebook

    def frozen_modules(self):
        return [self.manifold, self.recognizer]

    def train(self, mode=True):
        super().train(mode)
        for module in self.frozen_modules():
            module.eval()
        return self

    def targets(self, pair):
        """
        Run the frozen models on the emotional spectrogram of a pair.

        :returns: :class:`FrozenTargets`.
        """
        latents = self.manifold.latents(pair.mel_emotional, pair.boundaries)
        distribution = predict_distribution(pair.mel_emotional, pair.boundaries, self.recognizer)
        return FrozenTargets(latents.codes.numpy(), distribution.matrix)

    def gen_manifold(self, distribution, quantizer=quantize):
        """
        Generate the emotion manifold commanded by a distribution.

        :param distribution: ``t x n`` matrix or :class:`EmotionDistribution`.
        :param callable quantizer: Maps continuous latents and the codebook to
            :class:`ManifoldLatents`.

        :returns: :class:`GeneratedManifold`.
        """
        if self.explicit_only:
            raise ConfigurationError("An explicit only model has no generator.")
        if isinstance(distribution, EmotionDistribution):
            distribution = distribution.matrix
        pre_gen = self.generator(as_tensor(distribution))
        latents = quantizer(pre_gen, self.codebook)
        return GeneratedManifold(pre_gen, latents.indices, latents.quantized)

    def synthesize(self, phonemes, speaker_id, codes):
        """
        Synthesize a spectrogram from per phoneme emotion codes.

        :param PhonemeSequence phonemes: Phonemes and durations.
        :param int speaker_id: Speaker.
        :param codes: ``t x d`` codes, usually the quantized generated manifold.

        :returns: ``frames x channels`` tensor.
        """
        codes = as_tensor(codes)
        if codes.shape[0] != len(phonemes):
            raise ConfigurationError(f"Got {codes.shape[0]} codes for {len(phonemes)} phonemes.")
        speaker = self.manifold.speakers(speaker_id, len(phonemes))
        return self.synthesizer(phonemes, self.adapter(codes), speaker)

    def forward(self, phonemes, speaker_id, distribution, quantizer=quantize):
        """
        :returns: Tuple of the synthesized spectrogram and the :class:`GeneratedManifold`,
            ``None`` for an explicit only model.
        """
        if isinstance(distribution, EmotionDistribution):
            distribution = distribution.matrix
        if len(distribution) != len(phonemes):
            raise ConfigurationError(
                f"Got a distribution over {len(distribution)} phonemes for {len(phonemes)}."
            )
        if self.explicit_only:
            projected = self.projection(as_tensor(distribution))
            return self.synthesize(phonemes, speaker_id, projected), None
        generated = self.gen_manifold(distribution, quantizer)
        codes = generated.quantized
        if self._config.detach_synthesis:
            codes = F.stop_gradient(codes)
        return self.synthesize(phonemes, speaker_id, codes), generated

    def loss(self, pair, targets, quantizer=quantize):
        """
        ``L_syn + lambda * L_imp`` of a training pair.

        :returns: Tuple of the total loss and a dictionary of its parts.
        """
        mel, generated = self(pair.phonemes, pair.speaker_id, targets.distribution, quantizer)
        synthesis = mse_loss(mel, pair.mel_emotional)
        if generated is None:
            return synthesis, {"synthesis": synthesis}
        implicit = loss_imp(generated.pre_gen, targets.codes)
        total = synthesis + self._config.lambda_imp * implicit
        return total, {"synthesis": synthesis, "implicit": implicit, "generated": generated}

    def infer(self, phonemes, speaker_id, distribution):
        """
        Synthesize in inference mode.

        :returns: ``frames x channels`` ``numpy.float32`` spectrogram.
        """
        training = self.training
        self.eval()
        try:
            mel, _ = self(phonemes, speaker_id, distribution)
        finally:
            self.train(training)
        return mel.data.astype(np.float32)

    def to_checkpoint(self, metrics=None):
        checkpoint = Checkpoint.for_run(self.kind, self._config, self._corpus_config, metrics)
        checkpoint.meta.update(self.manifold.config.to_meta("manifold.config."))
        checkpoint.meta.update(self.recognizer.config.to_meta("swer.config."))
        checkpoint.add_module(self.kind, self)
        return checkpoint

    @classmethod
    def from_checkpoint(cls, checkpoint):
        corpus_config = checkpoint.corpus_config()
        manifold = ManifoldModel(
            RunConfig.from_meta(checkpoint.meta, "manifold.config."), corpus_config
        )
        recognizer = PredD(RunConfig.from_meta(checkpoint.meta, "swer.config."), corpus_config)
        model = cls(checkpoint.run_config(), manifold, recognizer)
        checkpoint.load_module(cls.kind, model)
        return model.eval()

    @classmethod
    def load_from_disk(cls, path):
        return cls.from_checkpoint(Checkpoint.load_from_disk(path, cls.kind))


def infer_from_curves(phonemes, speaker_id, curves, model):
    """
    Synthesize a spectrogram following user intensity curves.

    :param PhonemeSequence phonemes: Phonemes and durations.
    :param int speaker_id: Speaker.
    :param CurveSpec curves: Commanded intensities.
    :param CascadeModel model: Trained cascade.

    :returns: Tuple of the ``frames x channels`` spectrogram and the commanded
        :class:`EmotionDistribution`.
    """
    phonemes.check_vocabulary(model.corpus_config.vocab)
    distribution = curves.distribution(len(phonemes), model.corpus_config.emotions)
    return model.infer(phonemes, speaker_id, distribution), distribution
