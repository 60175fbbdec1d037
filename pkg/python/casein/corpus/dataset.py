# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os

from casein.config import CorpusConfig
from casein.corpus.emotion import Emotion
from casein.corpus.phonemes import PhonemeSequence
from casein.corpus.utterance import UtterancePair
from casein.errors import DataError, MissingArtifactError
from casein.storage import Container, ContainerReader


SPLITS = ("train", "val", "test")


def split_path(folder, split):
    """
    :returns: Path of the container file of a split inside a corpus folder.
    """
    return os.path.join(folder, f"{split}.casein")


class Dataset:
    """
    One split of the corpus: utterance pairs and the configuration they were generated
    with.

    On disk, a split is a container whose header indexes every utterance (phonemes,
    durations, speaker, emotion, pattern) and whose blobs hold the intensities and both
    spectrograms of each pair.
    """

    def __init__(self, config, split, pairs):
        """
        :param CorpusConfig config: Configuration of the corpus.
        :param str split: ``train``, ``val`` or ``test``.
        :param list pairs: :class:`UtterancePair` objects.
        """
        self._config = config
        self._split = split
        self._pairs = list(pairs)
        self._by_name = {pair.name: pair for pair in self._pairs}

    @property
    def config(self):
        return self._config

    @property
    def split(self):
        return self._split

    @property
    def pairs(self):
        return self._pairs

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __getitem__(self, index):
        return self._pairs[index]

    def find(self, name):
        """
        :returns: The pair with the given name.

        :raises MissingArtifactError: If there is no such utterance in the split.
        """
        if name not in self._by_name:
            raise MissingArtifactError(f"Utterance {name} is not in the {self._split} split.")
        return self._by_name[name]

    def emotional(self):
        """
        :returns: The pairs whose emotion is not Neutral.
        """
        return [pair for pair in self._pairs if pair.emotion != Emotion.Neutral]

    def to_container(self):
        container = Container({"kind": "corpus", "split": self._split})
        for key, value in self._config.to_meta("corpus.").items():
            container.set_meta(key, value)
        container.set_meta("count", len(self._pairs))
        for index, pair in enumerate(self._pairs):
            prefix = f"utt.{index}."
            container.set_meta(prefix + "name", pair.name)
            container.set_meta(prefix + "phonemes", pair.phonemes.ids_text())
            container.set_meta(prefix + "durations", pair.phonemes.durations_text())
            container.set_meta(prefix + "speaker", pair.speaker_id)
            container.set_meta(prefix + "emotion", int(pair.emotion))
            container.set_meta(prefix + "pattern", pair.pattern)
            container.add_blob(prefix + "intensity", pair.intensity)
            container.add_blob(prefix + "neutral", pair.mel_neutral)
            container.add_blob(prefix + "emotional", pair.mel_emotional)
        return container

    def save(self, path):
        """
        Write the split atomically.
        """
        self.to_container().save(path)

    @classmethod
    def load_from_disk(cls, path):
        """
        Read a split.

        :raises MissingArtifactError: If the file does not exist.
        :raises DataError: If the file is not a corpus split.
        """
        if not os.path.isfile(path):
            raise MissingArtifactError(f"Corpus split {path} does not exist.")
        return cls.load_from_container(ContainerReader.load_from_disk(path), path)

    @classmethod
    def load_from_container(cls, container, path=None):
        meta, blobs = container.meta, container.blobs
        where = path or "container"
        if meta.get("kind") != "corpus":
            raise DataError(f"{where} is not a corpus split.")
        config = CorpusConfig.from_meta(meta, "corpus.")
        pairs = []
        try:
            for index in range(int(meta["count"])):
                prefix = f"utt.{index}."
                phonemes = PhonemeSequence.from_text(
                    meta[prefix + "phonemes"], meta[prefix + "durations"]
                )
                pairs.append(
                    UtterancePair(
                        meta[prefix + "name"],
                        phonemes,
                        int(meta[prefix + "speaker"]),
                        int(meta[prefix + "emotion"]),
                        blobs[prefix + "intensity"],
                        blobs[prefix + "neutral"],
                        blobs[prefix + "emotional"],
                        meta[prefix + "pattern"],
                    )
                )
        except KeyError as e:
            raise DataError(f"{where} is missing the entry {e}.") from e
        return cls(config, meta["split"], pairs)


def load_split(folder, split):
    """
    Read one split of a corpus folder.
    """
    return Dataset.load_from_disk(split_path(folder, split))
