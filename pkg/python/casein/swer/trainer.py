# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.errors import DataError
from casein.numerics.losses import bce_elementwise
from casein.swer.model import PredD
from casein.swer.windows import slice_windows
from casein.training import TrainerBase


class WindowSample:
    """
    One training sample: a window and the emotion label of its utterance.
    """

    __slots__ = ("frames", "label")

    def __init__(self, frames, label):
        self.frames = frames
        self.label = label


def window_samples(dataset, radius):
    """
    Every window of every utterance of a split, each labeled with its utterance's
    emotion.
    """
    count = dataset.config.emotions
    samples = []
    for pair in dataset:
        label = pair.label(count)
        for window in slice_windows(pair.mel_emotional, pair.boundaries, radius):
            samples.append(WindowSample(window.frames, label))
    return samples


class SwerTrainer(TrainerBase):
    """
    Trains the sliding window emotion recognizer with element-wise binary cross-entropy.
    Validation also reports the window accuracy: the share of windows whose highest
    logit is the utterance's emotion.
    """

    name = "swer"

    def __init__(self, config, out_path, train_set, val_set=None):
        super().__init__(config, out_path, train_set, val_set)
        self._model = PredD(config, train_set.config)

    def _training_items(self):
        return window_samples(self._train_set, self._config.radius)

    def _validation_items(self):
        if self._val_set is None:
            return []
        return window_samples(self._val_set, self._config.radius)

    def _item_loss(self, sample):
        return bce_elementwise(self._model(sample.frames), sample.label)

    def _validation_metrics(self, samples):
        if not samples:
            raise DataError("No windows to validate the swer on.")
        losses = []
        hits = 0
        for sample in samples:
            logits = self._model(sample.frames)
            losses.append(bce_elementwise(logits, sample.label).item())
            hits += int(np.argmax(logits.data) == np.argmax(sample.label))
        return {"loss": float(np.mean(losses)), "accuracy": hits / len(samples)}

    def _checkpoint(self, metrics):
        return self._model.to_checkpoint(metrics)


def window_accuracy(model, dataset):
    """
    Share of the windows of a split whose highest logit is the utterance's emotion.

    :raises DataError: If the split is empty.
    """
    training = model.training
    model.eval()
    try:
        samples = window_samples(dataset, model.radius)
        if not samples:
            raise DataError(f"The {dataset.split} split has no windows to recognize.")
        hits = sum(
            int(np.argmax(model(sample.frames).data) == np.argmax(sample.label))
            for sample in samples
        )
    finally:
        model.train(training)
    return hits / len(samples)


def train_swer(config, out_path, train_set, val_set=None):
    """
    Train the sliding window emotion recognizer with the configured window radius.

    :returns: The :class:`SwerTrainer`, once trained.
    """
    trainer = SwerTrainer(config, out_path, train_set, val_set)
    trainer.run()
    return trainer
