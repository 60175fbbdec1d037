# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os
from collections import OrderedDict

from casein.cascade import CascadeModel, train_casein
from casein.config import combined_text
from casein.corpus import generate_corpus, load_split
from casein.errors import ConfigurationError
from casein.evaluation import evaluate
from casein.manifold import ManifoldModel, train_manifold
from casein.storage import atomic_write
from casein.swer import PredD, train_swer


# Phases and the offset of their seed from the global seed.
PHASE_SEEDS = OrderedDict([("manifold", 0), ("swer", 1), ("casein", 2)])


def phase_config(config, phase):
    """
    :returns: The configuration of a training phase, seeded from the global seed.
    """
    return config.copy(seed=config.seed + PHASE_SEEDS[phase])


def check_corpus(model, dataset):
    """
    :raises ConfigurationError: If a model was trained on a corpus configured
        differently from ``dataset``.
    """
    if model.corpus_config != dataset.config:
        raise ConfigurationError(
            f"The {model.kind} model was trained on a different corpus than the "
            f"{dataset.split} split."
        )


def run_pipeline(config, corpus_config, out, with_explicit=False, workers=None):
    """
    Run every phase in order: generate the corpus, train the manifold, train the emotion
    recognizer, train the cascade and evaluate it on the test split.

    The manifold, the recognizer and the cascade are trained with seeds ``seed``,
    ``seed + 1`` and ``seed + 2`` so every phase can be reproduced alone.

    :param casein.config.RunConfig config: Run configuration.
    :param casein.config.CorpusConfig corpus_config: Corpus configuration.
    :param str out: Output folder.
    :param bool with_explicit: Also train an explicit only cascade, with the same seed,
        and report it next to the full model.
    :param int workers: Number of threads for corpus generation and evaluation.

    :returns: Dictionary of artifact names to paths.
    """
    data = os.path.join(out, "data")
    config = config.copy(data_dir=data)
    paths = OrderedDict()
    paths["config"] = os.path.join(out, "config.txt")
    atomic_write(paths["config"], combined_text(config, corpus_config))

    generate_corpus(corpus_config, data, workers, config.verbose)
    train_set, val_set = load_split(data, "train"), load_split(data, "val")

    paths["manifold"] = os.path.join(out, "manifold.ckpt")
    train_manifold(phase_config(config, "manifold"), paths["manifold"], train_set, val_set)
    paths["swer"] = os.path.join(out, "swer.ckpt")
    train_swer(phase_config(config, "swer"), paths["swer"], train_set, val_set)

    manifold = ManifoldModel.load_from_disk(paths["manifold"])
    recognizer = PredD.load_from_disk(paths["swer"])
    paths["casein"] = os.path.join(out, "casein.ckpt")
    cascade_config = phase_config(config, "casein")
    train_casein(cascade_config, paths["casein"], manifold, recognizer, train_set, val_set)
    explicit_model = None
    if with_explicit:
        paths["explicit"] = os.path.join(out, "explicit.ckpt")
        train_casein(
            cascade_config.copy(explicit_only=True),
            paths["explicit"],
            ManifoldModel.load_from_disk(paths["manifold"]),
            PredD.load_from_disk(paths["swer"]),
            train_set,
            val_set,
        )
        explicit_model = CascadeModel.load_from_disk(paths["explicit"])

    paths["report"] = os.path.join(out, "report.csv")
    report = evaluate(
        CascadeModel.load_from_disk(paths["casein"]),
        load_split(data, "test"),
        explicit_model,
        workers,
        config.verbose,
    )
    report.save(paths["report"])
    if config.verbose:
        print(f"Wrote the evaluation report to {paths['report']}")
    return paths
