# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os

import numpy as np
import pytest

from casein.config import CorpusConfig, RunConfig
from casein.errors import DataError, MissingArtifactError
from casein.numerics import Checkpoint
from casein.numerics.layers import ConvPair


def test_checkpoint_round_trip(tmpdir):
    rng = np.random.default_rng(0)
    config = RunConfig(epochs=3, lambda_imp=0.25, detach_synthesis=True)
    corpus_config = CorpusConfig(train=5, speakers=2)
    module = ConvPair(3, 4, 2, 3, rng)

    checkpoint = Checkpoint.for_run("swer", config, corpus_config, {"loss": 0.125})
    checkpoint.add_module("extractor", module)
    path = os.path.join(str(tmpdir), "model.ckpt")
    checkpoint.save(path)

    loaded = Checkpoint.load_from_disk(path, "swer")
    assert loaded.kind == "swer"
    assert loaded.run_config() == config
    assert loaded.corpus_config() == corpus_config
    assert loaded.metric("loss") == 0.125
    assert loaded.metric("missing") is None
    assert list(loaded.tensors) == [f"extractor.{name}" for name, _ in module.named_parameters()]

    restored = loaded.load_module("extractor", ConvPair(3, 4, 2, 3, np.random.default_rng(9)))
    for name, value in module.state_dict().items():
        np.testing.assert_array_equal(restored.state_dict()[name], value)


def test_missing_checkpoint(tmpdir):
    with pytest.raises(MissingArtifactError):
        Checkpoint.load_from_disk(os.path.join(str(tmpdir), "nope.ckpt"))
    with pytest.raises(MissingArtifactError):
        Checkpoint.load_from_disk(None)


def test_wrong_kind(tmpdir):
    path = os.path.join(str(tmpdir), "manifold.ckpt")
    Checkpoint.for_run("manifold", RunConfig(), CorpusConfig()).save(path)
    with pytest.raises(DataError):
        Checkpoint.load_from_disk(path, "casein")
    assert Checkpoint.load_from_disk(path).kind == "manifold"


def test_not_a_checkpoint(tmpdir):
    path = os.path.join(str(tmpdir), "garbage.ckpt")
    with open(path, "wb") as fh:
        fh.write(b"definitely not a container")
    with pytest.raises(DataError):
        Checkpoint.load_from_disk(path)
