# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.errors import ConfigurationError


class PhonemeSequence:
    """
    Phoneme ids of an utterance with the number of frames each one lasts.

    Boundaries are derived from the durations and tile ``[0, frames)`` exactly.
    """

    __slots__ = ("_ids", "_durations")

    def __init__(self, ids, durations):
        """
        :param ids: Phoneme ids.
        :param durations: Frame count of every phoneme, at least 1.

        :raises ConfigurationError: If the lengths differ, the sequence is empty or a
            duration is smaller than 1.
        """
        ids = np.array(ids, dtype=np.int64).reshape(-1)
        durations = np.array(durations, dtype=np.int64).reshape(-1)
        if len(ids) != len(durations):
            raise ConfigurationError(f"Got {len(ids)} phonemes and {len(durations)} durations.")
        if len(ids) == 0:
            raise ConfigurationError("A phoneme sequence can't be empty.")
        if np.any(durations < 1):
            raise ConfigurationError("Phoneme durations must be at least one frame.")
        if np.any(ids < 0):
            raise ConfigurationError("Phoneme ids can't be negative.")
        ids.flags.writeable = False
        durations.flags.writeable = False
        self._ids = ids
        self._durations = durations

    @classmethod
    def from_text(cls, ids, durations):
        """
        Parse space separated phoneme ids and durations, e.g. ``"3 7 1 9"``.
        """
        try:
            return cls([int(v) for v in ids.split()], [int(v) for v in durations.split()])
        except ValueError as e:
            raise ConfigurationError(f"Phonemes and durations must be integers: {e}") from e

    @property
    def ids(self):
        return self._ids

    @property
    def durations(self):
        return self._durations

    @property
    def frames(self):
        """
        Total number of frames.
        """
        return int(self._durations.sum())

    @property
    def starts(self):
        return np.concatenate([[0], np.cumsum(self._durations)[:-1]])

    @property
    def boundaries(self):
        """
        List of ``(start, end)`` frame ranges, one per phoneme.
        """
        ends = np.cumsum(self._durations)
        return [(int(end - d), int(end)) for end, d in zip(ends, self._durations)]

    def check_vocabulary(self, vocab):
        """
        :raises ConfigurationError: If an id is not in ``[0, vocab)``.
        """
        if self._ids.max() >= vocab:
            raise ConfigurationError(
                f"Phoneme id {int(self._ids.max())} is out of range [0, {vocab})."
            )

    def ids_text(self):
        return " ".join(str(v) for v in self._ids)

    def durations_text(self):
        return " ".join(str(v) for v in self._durations)

    def __len__(self):
        return len(self._ids)

    def __eq__(self, other):
        return (
            isinstance(other, PhonemeSequence)
            and np.array_equal(self._ids, other._ids)
            and np.array_equal(self._durations, other._durations)
        )

    def __repr__(self):
        return f"<PhonemeSequence ids=[{self.ids_text()}] durations=[{self.durations_text()}]>"
