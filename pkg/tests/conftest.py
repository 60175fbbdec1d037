# -*- coding: utf-8 -*-
import sys
import os

import pytest

# Adds the casein source code to the PYTHONPATH.
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "python"))

from casein.cascade import CascadeModel, train_casein
from casein.config import CorpusConfig, RunConfig
from casein.corpus import SPLITS, generate_split
from casein.manifold import ManifoldModel, train_manifold
from casein.swer import PredD, train_swer


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="Run the full size training runs."
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full size training run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def _tiny_corpus_config(**overrides):
    """
    Corpus small enough to train on in a fraction of a second.
    """
    values = dict(
        train=8,
        val=2,
        test=3,
        min_phonemes=4,
        max_phonemes=6,
        min_duration=3,
        max_duration=5,
        vocab=6,
        speakers=2,
        channels=24,
        formant_channels=8,
    )
    values["band.happy"] = "8:12"
    values["band.sad"] = "12:16"
    values["band.angry"] = "16:20"
    values["band.surprised"] = "20:24"
    values.update(overrides)
    return CorpusConfig(**values)


def _tiny_run_config(**overrides):
    values = dict(
        epochs=2,
        batch_size=3,
        hidden=8,
        codebook_size=8,
        codebook_dim=4,
        kernel=3,
        residual_blocks=1,
        radius=1,
        verbose=False,
    )
    values.update(overrides)
    return RunConfig(**values)


@pytest.fixture(scope="session")
def make_corpus_config():
    return _tiny_corpus_config


@pytest.fixture(scope="session")
def make_run_config():
    return _tiny_run_config


@pytest.fixture
def corpus_config():
    return _tiny_corpus_config()


@pytest.fixture
def run_config():
    return _tiny_run_config()


@pytest.fixture
def train_set(corpus_config):
    return generate_split(corpus_config, "train", verbose=False)


@pytest.fixture
def val_set(corpus_config):
    return generate_split(corpus_config, "val", verbose=False)


@pytest.fixture
def held_out_set(corpus_config):
    return generate_split(corpus_config, "test", verbose=False)


def _desk_run_config(**overrides):
    """
    Model small enough to learn the default corpus in minutes on numpy.
    """
    values = dict(
        epochs=30,
        batch_size=8,
        lr=2e-3,
        hidden=64,
        codebook_dim=64,
        residual_blocks=2,
        verbose=False,
    )
    values.update(overrides)
    return RunConfig(**values)


@pytest.fixture(scope="session")
def make_desk_config():
    return _desk_run_config


@pytest.fixture(scope="session")
def desk_splits():
    """
    Train, validation and test splits of the default corpus, with fewer utterances.
    """
    corpus_config = CorpusConfig(train=120, val=20, test=20)
    return [generate_split(corpus_config, split, verbose=False) for split in SPLITS]


@pytest.fixture(scope="session")
def desk_models(tmpdir_factory, desk_splits):
    """
    Every phase trained once on the desk splits, shared by the slow tests.
    """
    folder = str(tmpdir_factory.mktemp("desk"))
    train_set, val_set, _ = desk_splits
    manifold = train_manifold(
        _desk_run_config(), os.path.join(folder, "manifold.ckpt"), train_set, val_set
    )
    recognizer = train_swer(
        _desk_run_config(seed=1), os.path.join(folder, "swer.ckpt"), train_set, val_set
    )
    cascade = train_casein(
        _desk_run_config(seed=2),
        os.path.join(folder, "casein.ckpt"),
        ManifoldModel.load_from_disk(os.path.join(folder, "manifold.ckpt")),
        PredD.load_from_disk(os.path.join(folder, "swer.ckpt")),
        train_set,
        val_set,
    )
    return {
        "folder": folder,
        "manifold": manifold,
        "recognizer": recognizer,
        "cascade": cascade,
        "model": CascadeModel.load_from_disk(os.path.join(folder, "casein.ckpt")),
    }
