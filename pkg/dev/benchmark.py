#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import sys
import os
import tempfile
import time
import argparse

repo_root = os.path.join(os.path.dirname(__file__), "..", "python")

sys.path.insert(0, repo_root)

import casein  # noqa
from casein.cascade import train_casein  # noqa
from casein.corpus import generate_split  # noqa
from casein.manifold import train_manifold  # noqa
from casein.swer import train_swer  # noqa

parser = argparse.ArgumentParser(description="Times one training epoch of every phase.")
parser.add_argument("--nb-runs", "-n", type=int, default=1, help="number of times to train")
parser.add_argument("--train", type=int, default=50, help="number of training utterances")
parser.add_argument("--hidden", type=int, default=256, help="hidden size of the convolutions")

args = parser.parse_args()


def print_config(config, corpus_config):
    """
    Print the sizes that matter for speed.

    :param casein.RunConfig config: Run configuration.
    :param casein.CorpusConfig corpus_config: Corpus configuration.
    """
    print(f"Utterances: {corpus_config.train}")
    print(f"Channels: {corpus_config.channels}")
    print(f"Hidden size: {config.hidden}")
    print(f"Kernel: {config.kernel}")
    print(f"Codebook: {config.codebook_size}x{config.codebook_dim}")
    print(f"Batch size: {config.batch_size}")


def timed(name, function, *function_args):
    before = time.time()
    result = function(*function_args)
    elapsed = time.time() - before
    print(f"{name}: {elapsed:.2f} seconds")
    return result, elapsed


def main():
    """
    Trains every phase for one epoch and prints how long each took.
    """
    config = casein.RunConfig(epochs=1, hidden=args.hidden, verbose=False)
    corpus_config = casein.CorpusConfig(train=args.train, val=0, test=0)
    print_config(config, corpus_config)

    train_set, _ = timed("Corpus", generate_split, corpus_config, "train", None, False)
    frames = sum(len(pair.mel_emotional) for pair in train_set)

    totals = {"manifold": 0.0, "swer": 0.0, "casein": 0.0}
    with tempfile.TemporaryDirectory() as folder:
        for i in range(args.nb_runs):
            manifold_path = os.path.join(folder, "manifold.ckpt")
            manifold, elapsed = timed(
                "Manifold epoch", train_manifold, config, manifold_path, train_set
            )
            totals["manifold"] += elapsed
            swer_path = os.path.join(folder, "swer.ckpt")
            recognizer, elapsed = timed("SWER epoch", train_swer, config, swer_path, train_set)
            totals["swer"] += elapsed
            _, elapsed = timed(
                "Cascade epoch",
                train_casein,
                config,
                os.path.join(folder, "casein.ckpt"),
                manifold.model,
                recognizer.model,
                train_set,
            )
            totals["casein"] += elapsed
            print(f"Run #{i} completed.")

    print("===================================")
    print(f"Frames per epoch: {frames}")
    for name, total in totals.items():
        average = total / args.nb_runs
        print(f"{name}: {average:.2f} seconds per epoch, {frames / average:.0f} frames per second")


if __name__ == "__main__":
    main()
