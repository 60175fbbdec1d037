# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os

import numpy as np
import pytest

from casein.cascade import RECIPES, CurveSpec, recipe
from casein.corpus import Emotion
from casein.errors import ConfigurationError, DataError


def test_constant_curves():
    curves = CurveSpec.constant(happy=0.9, surprised=0.45)
    np.testing.assert_allclose(curves.evaluate(Emotion.Happy, 4), 0.9)
    np.testing.assert_allclose(curves.evaluate(Emotion.Surprised, 4), 0.45)
    np.testing.assert_allclose(curves.evaluate(Emotion.Sad, 4), 0.0)


def test_ramps_interpolate_over_the_utterance():
    curves = CurveSpec.ramp("sad", 0.2, 1.0)
    np.testing.assert_allclose(curves.evaluate(Emotion.Sad, 5), [0.2, 0.4, 0.6, 0.8, 1.0])
    # A single phoneme sits at the start of the curve.
    np.testing.assert_allclose(curves.evaluate(Emotion.Sad, 1), [0.2])


def test_curves_are_constant_beyond_their_anchors():
    curves = CurveSpec({"angry": [(0.25, 0.2), (0.75, 0.6)]})
    np.testing.assert_allclose(
        curves.evaluate(Emotion.Angry, 5), [0.2, 0.2, 0.4, 0.6, 0.6], atol=1e-12
    )


def test_conversion():
    curves = CurveSpec.conversion("happy", "sad")
    distribution = curves.distribution(3, 5)
    np.testing.assert_allclose(distribution.column(Emotion.Happy), [1.0, 0.5, 0.0])
    np.testing.assert_allclose(distribution.column(Emotion.Sad), [0.0, 0.5, 1.0])
    np.testing.assert_allclose(distribution.column(Emotion.Neutral), [0.0, 0.5, 0.0])


def test_empty_curves_command_neutral_speech():
    distribution = CurveSpec().distribution(4, 5)
    np.testing.assert_array_equal(distribution.column(Emotion.Neutral), np.ones(4))
    np.testing.assert_array_equal(distribution.matrix[:, 1:], np.zeros((4, 4)))


def test_parse():
    curves = CurveSpec.parse(
        "# Happy rises while Sad fades.\n"
        "happy: 0.0=0.0, 1.0=1.0\n"
        "\n"
        "Sad: 0=1, 1=0  # trailing comment\n"
        "surprise: 0.45\n"
    )
    assert list(curves.curves) == [Emotion.Happy, Emotion.Sad, Emotion.Surprised]
    assert curves.curves[Emotion.Sad] == [(0.0, 1.0), (1.0, 0.0)]
    assert curves.curves[Emotion.Surprised] == [(0.0, 0.45)]


def test_text_round_trip():
    curves = CurveSpec({"happy": [(0.0, 0.1), (0.5, 0.9), (1.0, 0.3)], "angry": [(0.0, 0.6)]})
    assert curves.to_text() == "happy: 0.0=0.1, 0.5=0.9, 1.0=0.3\nangry: 0.0=0.6\n"
    assert CurveSpec.parse(curves.to_text()).curves == curves.curves


@pytest.mark.parametrize(
    "text",
    [
        "happy 0.5",
        "happy: a=0.5",
        "happy: 0.5=",
        "bored: 0.5",
        "neutral: 0.5",
        "happy: 0.5=0.1, 0.2=0.3",
        "happy: 0.0=1.5",
        "happy: 1.5=0.5",
        "happy:",
    ],
)
def test_invalid_curves(text):
    with pytest.raises(ConfigurationError):
        CurveSpec.parse(text)


def test_emotions_the_model_does_not_know():
    with pytest.raises(ConfigurationError):
        CurveSpec.constant(surprised=0.5).distribution(3, 4)
    with pytest.raises(ConfigurationError):
        CurveSpec().evaluate(Emotion.Happy, 0)


def test_from_file(tmpdir):
    path = os.path.join(str(tmpdir), "curves.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("angry: 0=0, 1=1\n")
    assert CurveSpec.from_file(path).curves[Emotion.Angry] == [(0.0, 0.0), (1.0, 1.0)]
    with pytest.raises(DataError):
        CurveSpec.from_file(os.path.join(str(tmpdir), "missing.txt"))


def test_recipes():
    assert list(RECIPES) == ["proud", "disappointed", "devastated"]
    distribution = recipe("Proud").distribution(2, 5)
    np.testing.assert_allclose(distribution.matrix[0], [0.1, 0.9, 0.0, 0.0, 0.45], rtol=1e-6)
    devastated = recipe("devastated").distribution(1, 5).matrix[0]
    np.testing.assert_allclose(devastated, [0.07, 0.0, 0.93, 0.0, 0.1], rtol=1e-5)
    with pytest.raises(ConfigurationError):
        recipe("smug")
