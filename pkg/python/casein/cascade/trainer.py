# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from casein.cascade.model import CascadeModel
from casein.training import TrainerBase


class CascadeSample:
    """
    A training pair with the targets the frozen models computed for it.
    """

    __slots__ = ("pair", "targets")

    def __init__(self, pair, targets):
        self.pair = pair
        self.targets = targets


def quantized_distance(model, samples):
    """
    Mean, over every phoneme of the samples, of the distance between the quantized
    generated manifold and the target codes. This is the implicit control objective
    before the relaxation used for training.
    """
    training = model.training
    model.eval()
    try:
        distances = []
        for sample in samples:
            generated = model.gen_manifold(sample.targets.distribution)
            difference = generated.quantized.data - sample.targets.codes
            distances.append(np.sqrt(np.sum(difference * difference, axis=1)))
    finally:
        model.train(training)
    return float(np.mean(np.concatenate(distances)))


class CascadeTrainer(TrainerBase):
    """
    Trains the generator, the adapter and the synthesizer with the manifold and the
    emotion recognizer frozen.

    The frozen targets of every pair are computed once, up front, on a pool of threads.
    For the full model, the quantized distance to the target codes is measured on the
    training split before the first and after the last epoch.
    """

    name = "casein"

    def __init__(self, config, out_path, manifold, recognizer, train_set, val_set=None):
        super().__init__(config, out_path, train_set, val_set)
        self._model = CascadeModel(config, manifold, recognizer)
        self._train_samples = self._samples(train_set)
        self._val_samples = self._samples(val_set) if val_set is not None else []
        self._quantized_distances = {}

    @property
    def quantized_distances(self):
        """
        ``initial`` and ``final`` quantized distances to the target codes.
        """
        return self._quantized_distances

    def _samples(self, dataset):
        with ThreadPoolExecutor() as executor:
            targets = list(executor.map(self._model.targets, dataset))
        return [CascadeSample(pair, target) for pair, target in zip(dataset, targets)]

    def _training_items(self):
        return self._train_samples

    def _validation_items(self):
        return self._val_samples

    def _item_loss(self, sample):
        loss, _ = self._model.loss(sample.pair, sample.targets)
        return loss

    def _checkpoint(self, metrics):
        metrics = dict(metrics)
        metrics.update(
            (f"quantized_distance_{key}", value)
            for key, value in self._quantized_distances.items()
        )
        return self._model.to_checkpoint(metrics)

    def run(self):
        if not self._model.explicit_only:
            self._quantized_distances["initial"] = quantized_distance(
                self._model, self._train_samples
            )
        history = super().run()
        if not self._model.explicit_only:
            self._quantized_distances["final"] = quantized_distance(
                self._model, self._train_samples
            )
            if self._config.verbose:
                print(
                    f"Quantized distance to the target codes: "
                    f"{self._quantized_distances['initial']:.4f} -> "
                    f"{self._quantized_distances['final']:.4f}"
                )
        return history


def train_casein(config, out_path, manifold, recognizer, train_set, val_set=None):
    """
    Train the cascade.

    :param casein.config.RunConfig config: Run configuration.
    :param str out_path: Path of the best checkpoint.
    :param casein.manifold.ManifoldModel manifold: Trained manifold.
    :param casein.swer.PredD recognizer: Trained emotion recognizer.
    :param casein.corpus.Dataset train_set: Training split.
    :param casein.corpus.Dataset val_set: Validation split.

    :returns: The :class:`CascadeTrainer`, once trained.
    """
    trainer = CascadeTrainer(config, out_path, manifold, recognizer, train_set, val_set)
    trainer.run()
    return trainer
