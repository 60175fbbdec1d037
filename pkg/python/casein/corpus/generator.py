# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import functools
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from casein.corpus.dataset import SPLITS, Dataset, split_path
from casein.corpus.emotion import Emotion
from casein.corpus.patterns import PatternRegistry
from casein.corpus.phonemes import PhonemeSequence
from casein.corpus.renderer import Renderer
from casein.corpus.utterance import UtterancePair
from casein.errors import DataError


def generate_utterance(renderer, split, index):
    """
    Generate one utterance pair.

    The pair only depends on the corpus seed, the split and the index, so utterances can
    be generated in any order and on any thread.

    :param Renderer renderer: Renderer of the corpus.
    :param str split: Split the utterance belongs to.
    :param int index: Index of the utterance in its split.

    :returns: An :class:`UtterancePair`.
    """
    config = renderer.config
    rng = np.random.default_rng(
        np.random.SeedSequence([config.seed, SPLITS.index(split), index])
    )
    count = int(rng.integers(config.min_phonemes, config.max_phonemes + 1))
    phonemes = PhonemeSequence(
        rng.integers(0, config.vocab, size=count),
        rng.integers(config.min_duration, config.max_duration + 1, size=count),
    )
    speaker_id = int(rng.integers(0, config.speakers))
    emotion = Emotion(int(rng.integers(0, config.emotions)))

    mel_neutral = renderer.render_neutral(phonemes, speaker_id, rng)
    if emotion == Emotion.Neutral:
        pattern = "none"
        intensity = np.zeros(count, dtype=np.float32)
        mel_emotional = mel_neutral.copy()
    else:
        pattern = PatternRegistry.names()[int(rng.integers(len(PatternRegistry.names())))]
        intensity = PatternRegistry.create_intensity(pattern, count, rng).astype(np.float32)
        mel_emotional = renderer.apply_emotion(
            mel_neutral, emotion, intensity, phonemes.boundaries
        )
    return UtterancePair(
        f"{split}-{index:04d}",
        phonemes,
        speaker_id,
        emotion,
        intensity,
        mel_neutral,
        mel_emotional,
        pattern,
    )


def generate_split(config, split, workers=None, verbose=True):
    """
    Generate every utterance of a split on a pool of threads.

    :returns: A :class:`Dataset`.
    """
    generate = functools.partial(generate_utterance, Renderer(config), split)
    count = getattr(config, split)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        pairs = list(
            tqdm(
                executor.map(generate, range(count)),
                total=count,
                desc=f"Generating {split}",
                disable=not verbose,
            )
        )
    return Dataset(config, split, pairs)


def generate_corpus(config, folder, workers=None, verbose=True):
    """
    Generate the train, validation and test splits of a corpus.

    Utterances are generated in parallel; every split is written by this thread only,
    once complete.

    :param casein.config.CorpusConfig config: Corpus configuration.
    :param str folder: Destination folder. Created if needed.
    :param int workers: Number of generation threads. Defaults to the executor's choice.
    :param bool verbose: Show progress bars.

    :returns: Dictionary of split names to written paths.

    :raises DataError: If a file can't be written.
    """
    try:
        os.makedirs(folder, exist_ok=True)
    except OSError as e:
        raise DataError(f"Could not create {folder}: {e.strerror or e}") from e
    paths = {}
    for split in SPLITS:
        dataset = generate_split(config, split, workers, verbose)
        paths[split] = split_path(folder, split)
        dataset.save(paths[split])
        if verbose:
            print(f"Wrote {len(dataset)} utterances to {paths[split]}")
    return paths
