# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os

import numpy as np
import pytest

from casein.corpus import Dataset
from casein.errors import DataError
from casein.manifold import ManifoldModel, ManifoldTrainer, train_manifold


def test_training_writes_checkpoints(tmpdir, run_config, train_set, val_set):
    path = os.path.join(str(tmpdir), "manifold.ckpt")
    trainer = train_manifold(run_config, path, train_set, val_set)
    assert os.path.isfile(path)
    assert os.path.isfile(path + ".last")
    assert [metrics["epoch"] for metrics in trainer.history] == [1, 2]
    assert all(np.isfinite(metrics["val_loss"]) for metrics in trainer.history)
    # Codes are reseeded after every epoch but the last.
    assert len(trainer.reseeded) == 1

    loaded = ManifoldModel.load_from_disk(path + ".last")
    for name, value in trainer.model.state_dict().items():
        np.testing.assert_array_equal(loaded.state_dict()[name], value)


def test_training_is_deterministic(tmpdir, run_config, train_set):
    first = train_manifold(run_config, os.path.join(str(tmpdir), "a.ckpt"), train_set)
    second = train_manifold(run_config, os.path.join(str(tmpdir), "b.ckpt"), train_set)
    assert [m["train"] for m in first.history] == [m["train"] for m in second.history]
    for name, value in first.model.state_dict().items():
        np.testing.assert_array_equal(second.model.state_dict()[name], value)


def test_training_lowers_the_loss(tmpdir, make_run_config, train_set):
    config = make_run_config(epochs=15, lr=3e-3, dropout=0.0)
    trainer = train_manifold(config, os.path.join(str(tmpdir), "m.ckpt"), train_set)
    assert trainer.history[-1]["train"] < trainer.history[0]["train"]


def test_nothing_to_train_on(tmpdir, run_config, train_set):
    neutral = Dataset(train_set.config, "train", [p for p in train_set if p.emotion == 0])
    with pytest.raises(DataError):
        train_manifold(run_config, os.path.join(str(tmpdir), "m.ckpt"), neutral)


def test_nothing_to_validate_on(tmpdir, run_config, train_set):
    trainer = ManifoldTrainer(run_config, os.path.join(str(tmpdir), "m.ckpt"), train_set)
    with pytest.raises(DataError):
        trainer.evaluate()
