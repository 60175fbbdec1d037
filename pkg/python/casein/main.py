# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

"""CASEIN emotion controllable spectrogram synthesis.

Usage:
    casein generate-data [--config=<file>] [--data=<dir>] [--set=<kv>]... [options]
    casein train-manifold --out=<ckpt> [--config=<file>] [--data=<dir>] [--set=<kv>]... [options]
    casein train-swer --out=<ckpt> [--config=<file>] [--data=<dir>] [--set=<kv>]... [options]
    casein train-casein --out=<ckpt> [--manifold=<ckpt>] [--swer=<ckpt>] [--config=<file>]
                        [--data=<dir>] [--set=<kv>]... [options]
    casein synthesize [--ckpt=<ckpt>] (--curves=<file> | --recipe=<name>) --phonemes=<ids>
                      --durations=<frames> --out=<mel> [--speaker=<id>]
    casein predict-d [--ckpt=<ckpt>] --utterance=<name> --out=<csv> [--data=<dir>]
                     [--split=<name>]
    casein evaluate [--ckpt=<ckpt>] --report=<csv> [--explicit=<ckpt>] [--data=<dir>]
                    [--split=<name>] [--workers=<n>] [--quiet]
    casein analyze-manifold [--ckpt=<ckpt>] --utterance=<name> --out=<csv> [--data=<dir>]
                            [--split=<name>] [--quantized]
    casein pipeline --out=<dir> [--with-explicit] [--config=<file>] [--set=<kv>]... [options]
    casein -h | --help
    casein --version

Options:
    -h --help               Show this screen.
    --version               Show the version.
    --config=<file>         Flat "key = value" configuration file. Keys starting with
                            "corpus." configure the corpus.
    --set=<kv>              Override any configuration field, e.g. --set corpus.train=50.
                            Can be repeated. Takes precedence over the other flags.
    --data=<dir>            Corpus folder. Defaults to $CASEIN_DATA, then "data".
    --seed=<n>              Global seed.
    --epochs=<n>            Number of training epochs.
    --batch-size=<n>        Utterances, or windows, per optimizer step.
    --lr=<rate>             Peak learning rate.
    --lambda=<weight>       Weight of the implicit control loss.
    --radius=<w>            Emotion recognizer window radius, in phonemes.
    --codebook-size=<k>     Number of manifold codes.
    --codebook-dim=<d>      Size of the manifold codes.
    --hidden=<h>            Hidden size of the convolutions.
    --explicit-only         Train the cascade without the generator and the codebook.
    --detach-synthesis      Keep the synthesis loss from training the generator.
    --workers=<n>           Number of threads for generation and evaluation.
    --quiet                 Don't report progress.
    --manifold=<ckpt>       Trained manifold checkpoint.
    --swer=<ckpt>           Trained emotion recognizer checkpoint.
    --ckpt=<ckpt>           Checkpoint to use.
    --explicit=<ckpt>       Explicit only cascade to compare with.
    --curves=<file>         Intensity curves to command.
    --recipe=<name>         Mixed emotion to command: proud, disappointed or devastated.
    --phonemes=<ids>        Comma separated phoneme ids.
    --durations=<frames>    Comma separated phoneme durations, in frames.
    --speaker=<id>          Speaker id [default: 0].
    --utterance=<name>      Name of an utterance of the corpus, e.g. test-0003.
    --split=<name>          Corpus split [default: test].
    --quantized             Trace the code vectors instead of the continuous latents.
    --with-explicit         Also train and report an explicit only cascade.
"""

import os
import sys

from docopt import DocoptExit, docopt

from casein import __version__
from casein.cascade import CascadeModel, CurveSpec, infer_from_curves, recipe, train_casein
from casein.config import CORPUS_PREFIX, load_configs
from casein.corpus import PhonemeSequence, generate_corpus, load_split
from casein.errors import (
    CaseinError,
    ConfigurationError,
    DataError,
    DivergenceError,
    MissingArtifactError,
)
from casein.evaluation import analyze_manifold, evaluate
from casein.manifold import ManifoldModel, train_manifold
from casein.numerics import Checkpoint
from casein.pipeline import check_corpus, run_pipeline
from casein.storage import Container
from casein.swer import PredD, predict_distribution, train_swer


# Command line flags and the run configuration field they set.
_RUN_FLAGS = {
    "--seed": "seed",
    "--epochs": "epochs",
    "--batch-size": "batch_size",
    "--lr": "lr",
    "--lambda": "lambda_imp",
    "--radius": "radius",
    "--codebook-size": "codebook_size",
    "--codebook-dim": "codebook_dim",
    "--hidden": "hidden",
}
_RUN_SWITCHES = {
    "--explicit-only": "explicit_only",
    "--detach-synthesis": "detach_synthesis",
}


def _data_dir(arguments, config=None):
    return (
        arguments.get("--data")
        or os.environ.get("CASEIN_DATA")
        or (config.data_dir if config is not None else "data")
    )


def _configs(arguments):
    """
    Build the run and corpus configurations from the configuration file and the flags.
    """
    overrides = {field: arguments.get(flag) for flag, field in _RUN_FLAGS.items()}
    overrides.update(
        (field, True) for flag, field in _RUN_SWITCHES.items() if arguments.get(flag)
    )
    if arguments.get("--quiet"):
        overrides["verbose"] = False
    corpus_overrides = {}
    for assignment in arguments.get("--set") or []:
        key, sep, value = assignment.partition("=")
        if not sep:
            raise ConfigurationError(f"Expected --set key=value, got '{assignment}'.")
        key, value = key.strip(), value.strip()
        if key.startswith(CORPUS_PREFIX):
            corpus_overrides[key[len(CORPUS_PREFIX) :]] = value
        else:
            overrides[key] = value
    config, corpus_config = load_configs(arguments.get("--config"), overrides, corpus_overrides)
    return config.copy(data_dir=_data_dir(arguments, config)), corpus_config


def _required(arguments, flag, what):
    if not arguments.get(flag):
        raise MissingArtifactError(f"No {what} given: {flag} is required.")
    return arguments[flag]


def _load_kind(path, what):
    """
    Load a checkpoint whatever its kind.
    """
    if not path:
        raise MissingArtifactError(f"No {what} checkpoint given: --ckpt is required.")
    return Checkpoint.load_from_disk(path)


def _load_manifold(path):
    checkpoint = _load_kind(path, "manifold or cascade")
    if checkpoint.kind == CascadeModel.kind:
        return CascadeModel.from_checkpoint(checkpoint).manifold
    if checkpoint.kind == ManifoldModel.kind:
        return ManifoldModel.from_checkpoint(checkpoint)
    raise DataError(f"{path} is a {checkpoint.kind} checkpoint, it has no manifold.")


def _load_recognizer(path):
    checkpoint = _load_kind(path, "recognizer or cascade")
    if checkpoint.kind == CascadeModel.kind:
        return CascadeModel.from_checkpoint(checkpoint).recognizer
    if checkpoint.kind == PredD.kind:
        return PredD.from_checkpoint(checkpoint)
    raise DataError(f"{path} is a {checkpoint.kind} checkpoint, it has no emotion recognizer.")


def _load_cascade(path, flag="--ckpt"):
    if not path:
        raise MissingArtifactError(f"No cascade checkpoint given: {flag} is required.")
    return CascadeModel.load_from_disk(path)


def _workers(arguments):
    return int(arguments["--workers"]) if arguments.get("--workers") else None


def generate_data(arguments):
    config, corpus_config = _configs(arguments)
    generate_corpus(corpus_config, config.data_dir, _workers(arguments), config.verbose)


def _splits(config):
    return load_split(config.data_dir, "train"), load_split(config.data_dir, "val")


def train_manifold_command(arguments):
    config, _ = _configs(arguments)
    train_set, val_set = _splits(config)
    train_manifold(config, arguments["--out"], train_set, val_set)


def train_swer_command(arguments):
    config, _ = _configs(arguments)
    train_set, val_set = _splits(config)
    train_swer(config, arguments["--out"], train_set, val_set)


def train_casein_command(arguments):
    config, _ = _configs(arguments)
    manifold = ManifoldModel.load_from_disk(_required(arguments, "--manifold", "manifold"))
    recognizer = PredD.load_from_disk(_required(arguments, "--swer", "emotion recognizer"))
    train_set, val_set = _splits(config)
    check_corpus(manifold, train_set)
    check_corpus(recognizer, train_set)
    train_casein(config, arguments["--out"], manifold, recognizer, train_set, val_set)


def synthesize(arguments):
    model = _load_cascade(arguments["--ckpt"])
    if arguments["--curves"]:
        curves = CurveSpec.from_file(arguments["--curves"])
    else:
        curves = recipe(arguments["--recipe"])
    phonemes = PhonemeSequence.from_text(
        arguments["--phonemes"].replace(",", " "), arguments["--durations"].replace(",", " ")
    )
    try:
        speaker_id = int(arguments["--speaker"])
    except ValueError as e:
        raise ConfigurationError(f"Invalid speaker id: {e}") from e
    mel, distribution = infer_from_curves(phonemes, speaker_id, curves, model)

    container = Container({"kind": "mel"})
    container.set_meta("phonemes", phonemes.ids_text())
    container.set_meta("durations", phonemes.durations_text())
    container.set_meta("speaker", speaker_id)
    for name, anchors in curves.to_lines().items():
        container.set_meta(f"curves.{name}", anchors)
    for key, value in model.config.to_meta("config.").items():
        container.set_meta(key, value)
    for key, value in model.corpus_config.to_meta(CORPUS_PREFIX).items():
        container.set_meta(key, value)
    container.add_blob("mel", mel)
    container.add_blob("distribution", distribution.matrix)
    container.save(arguments["--out"])
    print(f"Wrote {mel.shape[0]} frames to {arguments['--out']}")


def _utterance(arguments, corpus_config):
    dataset = load_split(_data_dir(arguments), arguments["--split"])
    if dataset.config != corpus_config:
        raise ConfigurationError(
            f"The checkpoint was trained on a different corpus than the {dataset.split} split."
        )
    return dataset.find(arguments["--utterance"])


def predict_d(arguments):
    recognizer = _load_recognizer(arguments["--ckpt"])
    pair = _utterance(arguments, recognizer.corpus_config)
    distribution = predict_distribution(pair.mel_emotional, pair.boundaries, recognizer)
    distribution.save_csv(arguments["--out"])


def evaluate_command(arguments):
    model = _load_cascade(arguments["--ckpt"])
    explicit_model = None
    if arguments["--explicit"]:
        explicit_model = _load_cascade(arguments["--explicit"], "--explicit")
    dataset = load_split(_data_dir(arguments, model.config), arguments["--split"])
    check_corpus(model, dataset)
    report = evaluate(
        model, dataset, explicit_model, _workers(arguments), not arguments["--quiet"]
    )
    report.save(arguments["--report"])
    if not arguments["--quiet"]:
        print(f"Wrote {len(report)} measurements to {arguments['--report']}")


def analyze_manifold_command(arguments):
    manifold = _load_manifold(arguments["--ckpt"])
    pair = _utterance(arguments, manifold.corpus_config)
    analyze_manifold(manifold, pair, arguments["--quantized"]).save(arguments["--out"])


def pipeline(arguments):
    config, corpus_config = _configs(arguments)
    run_pipeline(
        config, corpus_config, arguments["--out"], arguments["--with-explicit"], _workers(arguments)
    )


_COMMANDS = {
    "generate-data": generate_data,
    "train-manifold": train_manifold_command,
    "train-swer": train_swer_command,
    "train-casein": train_casein_command,
    "synthesize": synthesize,
    "predict-d": predict_d,
    "evaluate": evaluate_command,
    "analyze-manifold": analyze_manifold_command,
    "pipeline": pipeline,
}


def main(argv=None):
    """
    Run a command.

    :param list argv: Command line arguments, without the program name. Defaults to
        ``sys.argv[1:]``.

    :returns: The exit code: 0 on success, 2 on a usage error, 3 when an artifact is
        missing, 4 on invalid configuration or data and 1 on any other failure.
    """
    try:
        arguments = docopt(__doc__, argv=argv, version=f"casein {__version__}")
    except DocoptExit as e:
        print(e, file=sys.stderr)
        return 2

    command = next(name for name in _COMMANDS if arguments[name])
    try:
        _COMMANDS[command](arguments)
    except MissingArtifactError as e:
        print(f"casein {command}: {e}", file=sys.stderr)
        return 3
    except (ConfigurationError, DataError) as e:
        print(f"casein {command}: {e}", file=sys.stderr)
        return 4
    except (DivergenceError, CaseinError) as e:
        print(f"casein {command}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
