# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.
from casein.corpus.emotion import Emotion, one_hot
from casein.corpus.phonemes import PhonemeSequence
from casein.corpus.renderer import Renderer
from casein.corpus.patterns import PatternRegistry
from casein.corpus.utterance import UtterancePair
from casein.corpus.dataset import SPLITS, Dataset, load_split, split_path
from casein.corpus.generator import generate_corpus, generate_split, generate_utterance


__all__ = [
    "Emotion",
    "one_hot",
    "PhonemeSequence",
    "Renderer",
    "PatternRegistry",
    "UtterancePair",
    "SPLITS",
    "Dataset",
    "load_split",
    "split_path",
    "generate_corpus",
    "generate_split",
    "generate_utterance",
]
