# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os

import numpy as np
import pytest

from casein.cascade import CascadeModel, CurveSpec, infer_from_curves, loss_imp, recipe
from casein.corpus import Emotion, PhonemeSequence
from casein.errors import ConfigurationError
from casein.manifold import ManifoldLatents, ManifoldModel
from casein.numerics import Tape, Tensor, gradcheck
from casein.numerics import functional as F
from casein.swer import PredD


def linear_quantizer(pre_quant, codebook):
    """
    Differentiable stand-in for the nearest code lookup.
    """
    indices = np.arange(pre_quant.shape[0]) % codebook.size
    codes = F.embedding(codebook.vectors, indices)
    return ManifoldLatents(pre_quant, indices, F.add(pre_quant, codes), codes)


@pytest.fixture
def frozen(run_config, corpus_config):
    return ManifoldModel(run_config, corpus_config), PredD(run_config, corpus_config)


@pytest.fixture
def make_model(frozen, make_run_config):
    def make(**overrides):
        return CascadeModel(make_run_config(**overrides), *frozen)

    return make


def test_targets(make_model, train_set):
    model = make_model()
    pair = train_set[0]
    targets = model.targets(pair)
    assert targets.codes.shape == (len(pair.phonemes), 4)
    assert targets.distribution.shape == (len(pair.phonemes), 5)
    codes = model.codebook.vectors.data
    assert all(any(np.array_equal(row, code) for code in codes) for row in targets.codes)


def test_frozen_models(make_model, frozen, train_set):
    model = make_model()
    manifold, recognizer = frozen
    assert not manifold.training and not recognizer.training
    assert manifold.parameters() == [] and recognizer.parameters() == []
    model.train()
    assert not manifold.training and not recognizer.training
    assert model.synthesizer.training

    owned = {id(p) for p in model.parameters()}
    assert not owned & {id(p) for _, p in manifold.named_parameters()}
    assert not owned & {id(p) for _, p in recognizer.named_parameters()}


def test_forward(make_model, train_set):
    model = make_model()
    pair = train_set[1]
    targets = model.targets(pair)
    mel, generated = model(pair.phonemes, pair.speaker_id, targets.distribution)
    assert mel.shape == pair.mel_emotional.shape
    assert generated.pre_gen.shape == (len(pair.phonemes), 4)
    np.testing.assert_array_equal(
        generated.quantized.data, model.codebook.vectors.data[generated.indices]
    )


def test_loss_parts(make_model, train_set):
    model = make_model(lambda_imp=0.5)
    pair = train_set[1]
    total, parts = model.loss(pair, model.targets(pair))
    assert total.item() == pytest.approx(
        parts["synthesis"].item() + 0.5 * parts["implicit"].item(), rel=1e-5
    )
    expected = loss_imp(parts["generated"].pre_gen, model.targets(pair).codes)
    assert parts["implicit"].item() == pytest.approx(expected.item())


def test_implicit_loss_rejects_mismatched_lengths():
    with pytest.raises(ConfigurationError):
        loss_imp(Tensor(np.zeros((3, 2))), np.zeros((2, 2)))


def _generator_gradients(model, pair):
    targets = model.targets(pair)
    model.zero_grad()
    with Tape() as tape:
        loss, _ = model.loss(pair, targets)
    tape.backward(loss)
    return [p.grad for _, p in model.generator.named_parameters()]


def test_synthesis_gradients_reach_the_generator(make_model, train_set):
    model = make_model(lambda_imp=0.0, dropout=0.0)
    grads = _generator_gradients(model, train_set[2])
    assert any(grad is not None and np.any(grad != 0) for grad in grads)


def test_detached_synthesis_only_trains_the_generator_on_the_implicit_loss(
    make_model, train_set
):
    model = make_model(lambda_imp=0.0, dropout=0.0, detach_synthesis=True)
    grads = _generator_gradients(model, train_set[2])
    assert all(grad is None or not np.any(grad) for grad in grads)

    model = make_model(lambda_imp=1.0, dropout=0.0, detach_synthesis=True)
    grads = _generator_gradients(model, train_set[2])
    assert any(grad is not None and np.any(grad != 0) for grad in grads)
    assert all(p.grad is None for _, p in model.manifold.named_parameters())
    assert all(p.grad is None for _, p in model.recognizer.named_parameters())


@pytest.mark.parametrize("seed", range(20))
def test_gradients(make_model, train_set, seed):
    model = make_model(lambda_imp=0.3)
    pair = train_set[seed % len(train_set)]
    targets = model.targets(pair)
    model.eval()
    model.astype(np.float64)

    def loss():
        return model.loss(pair, targets, linear_quantizer)[0]

    rng = np.random.default_rng(seed)
    result = gradcheck(loss, model.parameters(), h=1e-5, max_elements=4, rng=rng)
    assert result.passed(), result


def test_explicit_only(make_model, train_set):
    model = make_model(explicit_only=True)
    assert model.explicit_only
    assert not hasattr(model, "generator")
    pair = train_set[0]
    mel, generated = model(pair.phonemes, pair.speaker_id, model.targets(pair).distribution)
    assert generated is None
    assert mel.shape == pair.mel_emotional.shape
    total, parts = model.loss(pair, model.targets(pair))
    assert list(parts) == ["synthesis"]
    assert total is parts["synthesis"]
    with pytest.raises(ConfigurationError):
        model.gen_manifold(np.full((3, 5), 0.5))


def test_inference(make_model):
    model = make_model()
    phonemes = PhonemeSequence([1, 4, 2], [3, 5, 2])
    mel, distribution = infer_from_curves(phonemes, 1, recipe("proud"), model)
    assert mel.shape == (10, 24)
    assert mel.dtype == np.float32
    np.testing.assert_allclose(distribution.column(Emotion.Happy), 0.9, rtol=1e-6)
    assert model.training

    again, _ = infer_from_curves(phonemes, 1, recipe("proud"), model)
    np.testing.assert_array_equal(mel, again)

    # An untrained generator may snap both commands to the same codes, so the continuous
    # latents are compared.
    _, ramp = infer_from_curves(phonemes, 1, CurveSpec.ramp("angry"), model)
    model.eval()
    proud = model.gen_manifold(distribution).pre_gen.data
    angry = model.gen_manifold(ramp).pre_gen.data
    assert not np.allclose(proud, angry)


def test_zero_initialized_generator(make_model):
    model = make_model(zero_init_generator=True).eval()
    generated = model.gen_manifold(np.zeros((4, 5)))
    np.testing.assert_array_equal(generated.pre_gen.data, 0.0)
    closest = np.argmin(np.linalg.norm(model.codebook.vectors.data, axis=1))
    np.testing.assert_array_equal(generated.indices, closest)
    codes = model.codebook.vectors.data
    np.testing.assert_array_equal(generated.quantized.data, codes[[closest] * 4])

    assert np.any(make_model().eval().gen_manifold(np.zeros((4, 5))).pre_gen.data != 0)


def test_inference_errors(make_model):
    model = make_model()
    curves = recipe("proud")
    with pytest.raises(ConfigurationError):
        infer_from_curves(PhonemeSequence([6], [3]), 0, curves, model)
    with pytest.raises(ConfigurationError):
        infer_from_curves(PhonemeSequence([1], [3]), 2, curves, model)
    with pytest.raises(ConfigurationError):
        model.infer(PhonemeSequence([1, 2], [3, 3]), 0, np.full((3, 5), 0.5))


def test_incompatible_frozen_models(frozen, make_run_config, make_corpus_config):
    manifold, _ = frozen
    with pytest.raises(ConfigurationError):
        CascadeModel(make_run_config(hidden=16), *frozen)
    other = PredD(make_run_config(), make_corpus_config(emotions=3))
    with pytest.raises(ConfigurationError):
        CascadeModel(make_run_config(), manifold, other)


def test_checkpoint_round_trip(tmpdir, make_model):
    model = make_model(lambda_imp=0.2)
    path = os.path.join(str(tmpdir), "casein.ckpt")
    model.to_checkpoint({"val_loss": 2.0}).save(path)

    loaded = CascadeModel.load_from_disk(path)
    assert loaded.config == model.config
    assert loaded.manifold.config == model.manifold.config
    assert loaded.recognizer.config == model.recognizer.config
    phonemes = PhonemeSequence([0, 5, 3], [2, 4, 3])
    curves = CurveSpec.conversion("happy", "angry")
    np.testing.assert_array_equal(
        infer_from_curves(phonemes, 0, curves, loaded)[0],
        infer_from_curves(phonemes, 0, curves, model)[0],
    )


@pytest.mark.slow
def test_no_curves_gives_a_neutral_rendering(desk_models, desk_splits):
    model = desk_models["model"]
    config = model.corpus_config
    noise_floor = config.noise**2
    for pair in desk_splits[2]:
        mel, distribution = infer_from_curves(pair.phonemes, pair.speaker_id, CurveSpec(), model)
        np.testing.assert_array_equal(distribution.column(Emotion.Neutral), 1.0)
        for emotion in list(Emotion)[1 : config.emotions]:
            first, last = config.band(emotion)
            band = [np.var(mel[start:end, first:last], axis=0) for start, end in pair.boundaries]
            energy = np.mean([np.mean(variance) for variance in band])
            assert energy < 2 * noise_floor, (pair.name, emotion)
