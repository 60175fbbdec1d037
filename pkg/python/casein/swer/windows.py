# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

from casein.errors import ConfigurationError
from casein.numerics.functional import segment_table


class WindowedSlice:
    """
    Frames of a phoneme and of up to ``radius`` phonemes on each side of it.

    Windows are clamped at the ends of the utterance, so the first and last windows
    cover fewer phonemes.
    """

    __slots__ = ("frames", "center", "first", "last", "start", "end")

    def __init__(self, frames, center, first, last, start, end):
        """
        :param numpy.ndarray frames: ``(end - start) x channels`` view of the spectrogram.
        :param int center: Index of the phoneme the window is centered on.
        :param int first: First phoneme covered.
        :param int last: Last phoneme covered, inclusive.
        :param int start: First frame covered.
        :param int end: Frame after the last one covered.
        """
        self.frames = frames
        self.center = center
        self.first = first
        self.last = last
        self.start = start
        self.end = end

    @property
    def phonemes(self):
        return self.last - self.first + 1

    def __repr__(self):
        return (
            f"<WindowedSlice center={self.center} phonemes={self.first}..{self.last} "
            f"frames={self.start}..{self.end}>"
        )


def window_range(count, center, radius):
    """
    :returns: First and last (inclusive) phonemes of the window centered on ``center``.
    """
    return max(0, center - radius), min(count - 1, center + radius)


def slice_windows(mel, boundaries, radius):
    """
    Cut one window per phoneme.

    :param numpy.ndarray mel: ``frames x channels`` spectrogram.
    :param boundaries: ``(start, end)`` frame range of every phoneme.
    :param int radius: Number of neighbouring phonemes on each side. 0 gives the
        phoneme alone.

    :returns: List of :class:`WindowedSlice`, one per phoneme.
    """
    if radius < 0:
        raise ConfigurationError(f"Window radius must be >= 0, got {radius}.")
    starts, lengths = segment_table(boundaries, len(mel))
    ends = starts + lengths
    windows = []
    for center in range(len(starts)):
        first, last = window_range(len(starts), center, radius)
        start, end = int(starts[first]), int(ends[last])
        windows.append(WindowedSlice(mel[start:end], center, first, last, start, end))
    return windows
