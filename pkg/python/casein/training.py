# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import math

import numpy as np
from tqdm import tqdm

from casein.errors import DataError, DivergenceError
from casein.numerics import Adam, Tape, check_finite, lr_linear_decay


class TrainerBase:
    """
    Base class of the trainers.

    Takes care of the epoch loop: shuffling, gradient accumulation over batches, learning
    rate decay, validation, checkpointing and progress reporting. Every epoch is saved
    to ``<out>.last`` and the epoch with the lowest validation loss to ``<out>``.

    The derived class must set ``self._model`` and implement the following methods:

    - _item_loss, which returns the scalar loss of one training item
    - _checkpoint, which returns the :class:`Checkpoint` to save

    It can also override _training_items, _validation_items, _validation_metrics and
    _on_epoch_end.
    """

    name = "model"

    def __init__(self, config, out_path, train_set=None, val_set=None):
        """
        :param casein.config.RunConfig config: Run configuration.
        :param str out_path: Path of the best checkpoint.
        :param casein.corpus.Dataset train_set: Training split.
        :param casein.corpus.Dataset val_set: Validation split.
        """
        self._config = config
        self._out_path = out_path
        self._train_set = train_set
        self._val_set = val_set
        self._shuffle_rng = np.random.default_rng([config.seed, 2])
        self._history = []
        self._model = None

    @property
    def model(self):
        return self._model

    @property
    def history(self):
        """
        One dictionary of metrics per completed epoch.
        """
        return self._history

    def _training_items(self):
        return list(self._train_set)

    def _validation_items(self):
        return list(self._val_set) if self._val_set is not None else []

    def _item_loss(self, item):
        raise NotImplementedError(f"{self.__class__.__name__} does not implement _item_loss.")

    def _checkpoint(self, metrics):
        raise NotImplementedError(f"{self.__class__.__name__} does not implement _checkpoint.")

    def _on_epoch_end(self, epoch, is_last):
        """
        Called once the epoch was checkpointed.
        """

    def _after_step(self):
        """
        Called after every optimizer step.
        """

    def _validation_metrics(self, items):
        """
        Evaluate the model in inference mode.

        :returns: Dictionary of metrics. Holds at least ``loss``.
        """
        if not items:
            raise DataError(f"Nothing to validate the {self.name} on.")
        losses = [self._item_loss(item).item() for item in items]
        return {"loss": float(np.mean(losses))}

    def evaluate(self, items=None):
        """
        Evaluate the model on the validation items, or the given ones, without
        recording gradients.
        """
        items = self._validation_items() if items is None else items
        self._model.eval()
        try:
            return self._validation_metrics(items)
        finally:
            self._model.train()

    def run(self):
        """
        Train for the configured number of epochs.

        :returns: The metrics history.

        :raises DataError: If there is nothing to train on.
        :raises DivergenceError: If a loss or a gradient stops being finite.
        """
        config = self._config
        items = self._training_items()
        if not items:
            raise DataError(f"No training data for the {self.name}.")
        val_items = self._validation_items()
        optimizer = Adam(
            self._model.parameters(),
            lr=config.lr,
            betas=(config.beta1, config.beta2),
            epsilon=config.epsilon,
        )
        best = math.inf

        for epoch in range(config.epochs):
            optimizer.lr = lr_linear_decay(epoch, config.epochs, config.lr)
            self._model.train()
            order = self._shuffle_rng.permutation(len(items))
            batches = [
                order[start : start + config.batch_size]
                for start in range(0, len(order), config.batch_size)
            ]
            total = 0.0
            try:
                for batch in tqdm(
                    batches,
                    desc=f"{self.name} {epoch + 1}/{config.epochs}",
                    disable=not config.verbose,
                    leave=False,
                ):
                    optimizer.zero_grad()
                    for index in batch:
                        with Tape() as tape:
                            loss = self._item_loss(items[index])
                        check_finite(loss, f"the loss of {self.name}")
                        # Gradients are averaged over the batch.
                        tape.backward(loss, np.array(1.0 / len(batch)))
                        total += loss.item()
                    optimizer.step()
                    self._after_step()
            except DivergenceError as e:
                raise DivergenceError(
                    f"Training of the {self.name} diverged at epoch {epoch + 1}: {e}"
                ) from e

            metrics = {"epoch": epoch + 1, "train": total / len(items), "lr": optimizer.lr}
            if val_items:
                metrics.update(
                    (f"val_{key}" if key == "loss" else key, value)
                    for key, value in self.evaluate(val_items).items()
                )
            else:
                metrics["val_loss"] = metrics["train"]
            self._history.append(metrics)
            self._print_epoch(metrics)

            checkpoint = self._checkpoint(metrics)
            checkpoint.save(self._out_path + ".last")
            if metrics["val_loss"] < best:
                best = metrics["val_loss"]
                checkpoint.save(self._out_path)
            self._on_epoch_end(epoch, epoch == config.epochs - 1)
        return self._history

    def _print_epoch(self, metrics):
        if not self._config.verbose:
            return
        extra = "".join(
            f" {key} {value:.4f}"
            for key, value in metrics.items()
            if key not in ("epoch", "train", "val_loss", "lr")
        )
        print(
            f"Epoch {metrics['epoch']}/{self._config.epochs}: train {metrics['train']:.4f} "
            f"val {metrics['val_loss']:.4f} lr {metrics['lr']:.6f}{extra}"
        )
