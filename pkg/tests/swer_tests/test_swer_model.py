# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os

import numpy as np
import pytest

from casein.corpus import Emotion, Renderer
from casein.errors import ConfigurationError, DataError
from casein.evaluation import correlations
from casein.numerics import Checkpoint, bce_elementwise, gradcheck
from casein.swer import EmotionDistribution, PredD, predict_distribution
from casein.swer.windows import window_range


@pytest.fixture
def model(run_config, corpus_config):
    return PredD(run_config, corpus_config)


def test_probabilities_start_at_one_half(model, train_set):
    pair = train_set[0]
    distribution = predict_distribution(pair.mel_emotional, pair.boundaries, model)
    assert len(distribution) == len(pair.phonemes)
    assert distribution.emotions[-1].key == "surprised"
    np.testing.assert_allclose(distribution.matrix, 0.5)
    assert model.training


def test_predictions_are_deterministic_in_inference_mode(model, train_set):
    model.classifier.weight.data = np.random.default_rng(0).normal(size=(5, 8))
    pair = train_set[2]
    first = predict_distribution(pair.mel_emotional, pair.boundaries, model)
    second = predict_distribution(pair.mel_emotional, pair.boundaries, model)
    np.testing.assert_array_equal(first.matrix, second.matrix)
    assert np.all((first.matrix > 0) & (first.matrix < 1))


def test_constant_offsets_do_not_change_the_logits(model, train_set):
    model.classifier.weight.data = np.random.default_rng(1).normal(size=(5, 8))
    model.eval()
    frames = train_set[0].mel_emotional
    offsets = np.random.default_rng(2).uniform(-0.5, 0.5, size=frames.shape[1])
    np.testing.assert_allclose(
        model(frames + offsets).data, model(frames).data, rtol=1e-4, atol=1e-5
    )


@pytest.mark.parametrize("seed", range(20))
def test_gradients(model, train_set, seed):
    pair = train_set[seed % len(train_set)]
    model.eval()
    model.astype(np.float64)
    rng = np.random.default_rng(seed)
    model.classifier.weight.data = rng.normal(size=model.classifier.weight.shape)
    frames = pair.mel_emotional[: pair.boundaries[min(1, len(pair.phonemes) - 1)][1]]
    label = pair.label(5)

    def loss():
        return bce_elementwise(model(frames), label)

    result = gradcheck(loss, model.parameters(), h=1e-5, max_elements=6, rng=rng)
    assert result.passed(), result


def test_checkpoint_round_trip(tmpdir, model, train_set):
    model.classifier.bias.data = np.array([0.5, -1.0, 0.0, 2.0, 1.0])
    path = os.path.join(str(tmpdir), "swer.ckpt")
    model.to_checkpoint({"accuracy": 0.5}).save(path)
    loaded = PredD.load_from_disk(path)
    assert loaded.radius == model.radius
    pair = train_set[0]
    model.eval()
    np.testing.assert_array_equal(
        predict_distribution(pair.mel_emotional, pair.boundaries, loaded).matrix,
        predict_distribution(pair.mel_emotional, pair.boundaries, model).matrix,
    )
    Checkpoint.for_run("manifold", model.config, model.corpus_config).save(path)
    with pytest.raises(DataError):
        PredD.load_from_disk(path)


def test_distribution_validation():
    with pytest.raises(ConfigurationError):
        EmotionDistribution(np.zeros((0, 5)))
    with pytest.raises(ConfigurationError):
        EmotionDistribution(np.zeros((3, 1)))
    with pytest.raises(ConfigurationError):
        EmotionDistribution(np.zeros((3, 6)))
    with pytest.raises(ConfigurationError):
        EmotionDistribution([[0.5, 1.5]])
    with pytest.raises(ConfigurationError):
        EmotionDistribution([[0.5, np.nan]])


def test_distribution_csv(tmpdir):
    distribution = EmotionDistribution([[0.25, 0.5, 1.0], [0.0, 0.75, 0.125]])
    assert distribution.to_csv().splitlines() == [
        "phoneme,neutral,happy,sad",
        "0,0.25,0.5,1.0",
        "1,0.0,0.75,0.125",
    ]
    np.testing.assert_array_equal(distribution.column(2), [1.0, 0.125])

    path = os.path.join(str(tmpdir), "d.csv")
    distribution.save_csv(path)
    with open(path, "r", encoding="utf-8") as fh:
        assert fh.read() == distribution.to_csv()


@pytest.mark.slow
def test_full_intensity_happy_is_recognized(desk_models, desk_splits):
    model = desk_models["recognizer"].model
    renderer = Renderer(desk_splits[2].config)
    pair = desk_splits[2][0]
    intensity = np.ones(len(pair.phonemes))
    mel = renderer.apply_emotion(pair.mel_neutral, Emotion.Happy, intensity, pair.boundaries)
    means = predict_distribution(mel, pair.boundaries, model).matrix.mean(axis=0)
    others = np.delete(means, int(Emotion.Happy))
    assert np.all(means[Emotion.Happy] > others)


@pytest.mark.slow
def test_more_emotion_in_the_window_means_more_confidence(desk_models, desk_splits):
    model = desk_models["recognizer"].model
    probabilities = {}
    for pair in [pair for split in desk_splits[1:] for pair in split]:
        if pair.pattern not in ("ramp-up", "ramp-down"):
            continue
        count = len(pair.phonemes)
        column = predict_distribution(pair.mel_emotional, pair.boundaries, model).column(
            pair.emotion
        )
        for center in range(count):
            first, last = window_range(count, center, model.radius)
            level = round(float(np.mean(pair.intensity[first : last + 1])), 1)
            probabilities.setdefault(level, []).append(column[center])
    levels = sorted(probabilities)
    assert len(levels) >= 5
    averages = [np.mean(probabilities[level]) for level in levels]
    assert correlations(levels, averages).spearman >= 0.7
