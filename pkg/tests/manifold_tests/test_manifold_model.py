# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os

import numpy as np
import pytest

from casein.errors import ConfigurationError, DataError
from casein.manifold import ManifoldLatents, ManifoldModel, codebook_usage
from casein.numerics import Checkpoint, gradcheck
from casein.numerics import functional as F


def linear_quantizer(pre_quant, codebook):
    """
    Differentiable stand-in for the nearest code lookup: every row is shifted by a fixed
    code, so finite differences never cross a code boundary.
    """
    indices = np.arange(pre_quant.shape[0]) % codebook.size
    codes = F.embedding(codebook.vectors, indices)
    return ManifoldLatents(pre_quant, indices, F.add(pre_quant, codes), codes)


@pytest.fixture
def model(run_config, corpus_config):
    return ManifoldModel(run_config, corpus_config)


def test_shapes(model, train_set):
    pair = train_set[0]
    decoded, latents = model(pair.mel_emotional, pair.mel_neutral, pair.phonemes, pair.speaker_id)
    assert decoded.shape == pair.mel_emotional.shape
    assert latents.pre_quant.shape == (len(pair.phonemes), 4)
    assert latents.quantized.shape == (len(pair.phonemes), 4)
    assert np.all((latents.indices >= 0) & (latents.indices < 8))


def test_loss_parts(model, train_set):
    total, parts = model.loss(train_set[1])
    expected = (
        parts["reconstruction"].item()
        + parts["codebook"].item()
        + 0.25 * parts["commitment"].item()
    )
    assert total.item() == pytest.approx(expected, rel=1e-5)
    # Both vector quantization terms measure the same distance.
    assert parts["codebook"].item() == pytest.approx(parts["commitment"].item(), rel=1e-6)


def test_usage_is_only_counted_in_training(model, train_set):
    pair = train_set[0]
    model.eval()
    model(pair.mel_emotional, pair.mel_neutral, pair.phonemes, pair.speaker_id)
    assert model.codebook.usage.sum() == 0
    model.train()
    model(pair.mel_emotional, pair.mel_neutral, pair.phonemes, pair.speaker_id)
    assert model.codebook.usage.sum() == len(pair.phonemes)


def test_codebook_usage(model, train_set):
    counts = codebook_usage(model, train_set)
    assert counts.sum() == sum(len(pair.phonemes) for pair in train_set)
    assert model.training


def test_same_seed_same_model(run_config, corpus_config):
    first = ManifoldModel(run_config, corpus_config).state_dict()
    second = ManifoldModel(run_config, corpus_config).state_dict()
    third = ManifoldModel(run_config, corpus_config, seed=5).state_dict()
    for name in first:
        np.testing.assert_array_equal(first[name], second[name])
    assert any(not np.array_equal(first[name], third[name]) for name in first)


@pytest.mark.parametrize("seed", range(20))
def test_gradients(model, train_set, seed):
    """
    The vector quantization terms hold stop gradients that finite differences can't see,
    so only the reconstruction is checked.
    """
    pair = train_set[seed % len(train_set)]
    model.eval()
    model.astype(np.float64)

    def loss():
        return model.loss(pair, linear_quantizer)[1]["reconstruction"]

    rng = np.random.default_rng(seed)
    result = gradcheck(loss, model.parameters(), h=1e-5, max_elements=4, rng=rng)
    assert result.passed(), result


def test_decoder_rejects_mismatched_lengths(model, train_set):
    pair = train_set[0]
    condition = model.condition(pair.mel_neutral, pair.boundaries, pair.speaker_id)
    latents = model.latents(pair.mel_emotional, pair.boundaries)
    with pytest.raises(ConfigurationError):
        model.decoder(latents.quantized, condition, pair.phonemes.durations[:-1])


def test_checkpoint_round_trip(tmpdir, model, train_set):
    pair = train_set[0]
    model(pair.mel_emotional, pair.mel_neutral, pair.phonemes, pair.speaker_id)
    path = os.path.join(str(tmpdir), "manifold.ckpt")
    model.to_checkpoint({"val_loss": 1.5}).save(path)

    loaded = ManifoldModel.load_from_disk(path)
    assert not loaded.training
    assert loaded.config == model.config
    assert loaded.corpus_config == model.corpus_config
    assert loaded.codebook.usage.tolist() == model.codebook.usage.tolist()
    for name, value in model.state_dict().items():
        np.testing.assert_array_equal(loaded.state_dict()[name], value)

    model.eval()
    expected = model.latents(pair.mel_emotional, pair.boundaries).indices
    assert loaded.latents(pair.mel_emotional, pair.boundaries).indices.tolist() == (
        expected.tolist()
    )

    Checkpoint.for_run("swer", model.config, model.corpus_config).save(path)
    with pytest.raises(DataError):
        ManifoldModel.load_from_disk(path)


def _band_energy(mel, boundaries, band):
    """
    Variance along time of a band, averaged over its channels and over the phonemes.
    """
    first, last = band
    mel = np.asarray(mel, dtype=np.float64)
    energies = [np.mean(np.var(mel[start:end, first:last], axis=0)) for start, end in boundaries]
    return np.mean(energies)


@pytest.mark.slow
def test_emotion_goes_through_the_codes(desk_models, desk_splits):
    model = desk_models["manifold"].model.eval()
    config = model.corpus_config
    pairs = [pair for split in desk_splits for pair in split]
    loud = [
        pair
        for pair in pairs
        if pair.emotion != 0 and pair.pattern == "constant" and pair.intensity[0] >= 0.6
    ]
    borrowed, own = [], []
    for source in loud:
        count = len(source.phonemes)
        target = next((p for p in pairs if p is not source and len(p.phonemes) == count), None)
        if target is None:
            continue
        band = config.band(source.emotion)
        condition = model.condition(target.mel_neutral, target.boundaries, target.speaker_id)
        durations = target.phonemes.durations
        codes = model.latents(source.mel_emotional, source.boundaries).quantized
        decoded = model.decoder(codes, condition, durations)
        borrowed.append(_band_energy(decoded.data, target.boundaries, band))
        codes = model.latents(target.mel_neutral, target.boundaries).quantized
        decoded = model.decoder(codes, condition, durations)
        own.append(_band_energy(decoded.data, target.boundaries, band))
    assert len(borrowed) >= 5
    assert np.mean(borrowed) >= 3 * np.mean(own)
