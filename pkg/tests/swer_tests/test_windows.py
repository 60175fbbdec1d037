# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np
import pytest

from casein.corpus import PhonemeSequence
from casein.errors import ConfigurationError
from casein.swer import slice_windows, window_range


def _expected_window(durations, center, radius):
    """
    Frames of every phoneme at most ``radius`` phonemes away from ``center``.
    """
    covered = [index for index in range(len(durations)) if abs(index - center) <= radius]
    start = sum(durations[: covered[0]])
    end = sum(durations[: covered[-1] + 1])
    return covered[0], covered[-1], start, end


@pytest.mark.parametrize("count", range(1, 11))
@pytest.mark.parametrize("radius", range(0, 4))
def test_windows_match_brute_force(count, radius):
    rng = np.random.default_rng(count * 10 + radius)
    durations = rng.integers(1, 6, size=count).tolist()
    phonemes = PhonemeSequence(np.zeros(count, dtype=int), durations)
    mel = rng.random((phonemes.frames, 3))

    windows = slice_windows(mel, phonemes.boundaries, radius)
    assert len(windows) == count
    for center, window in enumerate(windows):
        first, last, start, end = _expected_window(durations, center, radius)
        assert window.center == center
        assert (window.first, window.last, window.start, window.end) == (first, last, start, end)
        assert window.phonemes == last - first + 1
        np.testing.assert_array_equal(window.frames, mel[start:end])


def test_radius_zero_is_the_phoneme_alone():
    mel = np.arange(12.0).reshape(6, 2)
    windows = slice_windows(mel, [(0, 2), (2, 3), (3, 6)], 0)
    assert [(w.start, w.end) for w in windows] == [(0, 2), (2, 3), (3, 6)]


def test_window_range_is_clamped():
    assert window_range(5, 0, 2) == (0, 2)
    assert window_range(5, 4, 2) == (2, 4)
    assert window_range(1, 0, 3) == (0, 0)


def test_invalid_windows():
    mel = np.zeros((6, 2))
    with pytest.raises(ConfigurationError):
        slice_windows(mel, [(0, 3), (3, 6)], -1)
    with pytest.raises(ConfigurationError):
        slice_windows(mel, [(0, 3), (3, 5)], 1)
