# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.manifold.model import ManifoldModel
from casein.training import TrainerBase


class ManifoldTrainer(TrainerBase):
    """
    Trains the emotion manifold on the emotional pairs of the corpus.

    Codes nobody used during an epoch are moved onto random encoder outputs of that
    epoch, except after the last one.
    """

    name = "manifold"

    def __init__(self, config, out_path, train_set, val_set=None):
        super().__init__(config, out_path, train_set, val_set)
        self._model = ManifoldModel(config, train_set.config)
        self._reseed_rng = np.random.default_rng([config.seed, 3])
        self._encoder_outputs = []
        self._reseeded = []

    @property
    def reseeded(self):
        """
        Number of codes reseeded after every epoch.
        """
        return self._reseeded

    def _training_items(self):
        return self._train_set.emotional()

    def _validation_items(self):
        return self._val_set.emotional() if self._val_set is not None else []

    def _item_loss(self, pair):
        loss, parts = self._model.loss(pair)
        if self._model.training:
            self._encoder_outputs.append(parts["latents"].pre_quant.numpy())
        return loss

    def _checkpoint(self, metrics):
        return self._model.to_checkpoint(metrics)

    def _on_epoch_end(self, epoch, is_last):
        if not is_last:
            candidates = np.concatenate(self._encoder_outputs)
            self._reseeded.append(self._model.codebook.reseed_dead(candidates, self._reseed_rng))
            self._model.codebook.reset_usage()
        self._encoder_outputs = []


def train_manifold(config, out_path, train_set, val_set=None):
    """
    Train the emotion manifold.

    :param casein.config.RunConfig config: Run configuration.
    :param str out_path: Path of the best checkpoint. The last epoch is also saved to
        ``<out_path>.last``.
    :param casein.corpus.Dataset train_set: Training split.
    :param casein.corpus.Dataset val_set: Validation split.

    :returns: The :class:`ManifoldTrainer`, once trained.
    """
    trainer = ManifoldTrainer(config, out_path, train_set, val_set)
    trainer.run()
    return trainer
