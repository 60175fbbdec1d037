# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import os
from collections import OrderedDict

from casein.config import CorpusConfig, RunConfig
from casein.errors import DataError, MissingArtifactError
from casein.storage import Container, ContainerReader


class Checkpoint:
    """
    Named float tensors and text metadata saved in a single container file.

    The metadata always holds the ``kind`` of checkpoint and the effective configuration
    of the run that produced it, under ``config.<field>`` keys.
    """

    __slots__ = ("_kind", "_tensors", "_meta")

    def __init__(self, kind, tensors=None, meta=None):
        """
        :param str kind: Which model the checkpoint holds, e.g. ``manifold``.
        :param dict tensors: Arrays indexed by dotted name.
        :param dict meta: Extra text values.
        """
        self._kind = kind
        self._tensors = OrderedDict(tensors or {})
        self._meta = OrderedDict(meta or {})

    @classmethod
    def for_run(cls, kind, config, corpus_config, metrics=None):
        """
        Create an empty checkpoint echoing the configuration of a run.

        :param str kind: Which model the checkpoint holds.
        :param RunConfig config: Effective run configuration.
        :param CorpusConfig corpus_config: Configuration of the corpus trained on.
        :param dict metrics: Training metrics, saved under ``train.<name>`` keys.
        """
        meta = OrderedDict(config.to_meta("config."))
        meta.update(corpus_config.to_meta("corpus."))
        for key, value in (metrics or {}).items():
            meta[f"train.{key}"] = repr(float(value))
        return cls(kind, meta=meta)

    @property
    def kind(self):
        return self._kind

    @property
    def tensors(self):
        """
        Ordered dictionary of the saved arrays.
        """
        return self._tensors

    @property
    def meta(self):
        """
        Ordered dictionary of the saved text values.
        """
        return self._meta

    def run_config(self):
        return RunConfig.from_meta(self._meta, "config.")

    def corpus_config(self):
        return CorpusConfig.from_meta(self._meta, "corpus.")

    def metric(self, name):
        """
        :returns: A training metric saved with :meth:`for_run`, or ``None``.
        """
        value = self._meta.get(f"train.{name}")
        return None if value is None else float(value)

    def add_module(self, prefix, module):
        """
        Store every parameter of a module under ``<prefix>.<parameter name>``.
        """
        self._tensors.update(module.state_dict(prefix + "."))

    def load_module(self, prefix, module):
        """
        Restore the parameters of a module saved with :meth:`add_module`.
        """
        module.load_state_dict(self._tensors, prefix + ".")
        return module

    def save(self, path):
        """
        Write the checkpoint atomically.

        :param str path: Destination path.
        """
        container = Container({"kind": self._kind}, self._tensors)
        for key, value in self._meta.items():
            container.set_meta(key, value)
        container.save(path)

    @classmethod
    def load_from_disk(cls, path, kind=None):
        """
        Read a checkpoint.

        :param str path: Path of the checkpoint.
        :param str kind: If set, the kind the checkpoint must have.

        :returns: A :class:`Checkpoint`.

        :raises MissingArtifactError: If there is no file at ``path``.
        :raises DataError: If the file is not a checkpoint of the expected kind.
        """
        if not path or not os.path.isfile(path):
            raise MissingArtifactError(f"Checkpoint {path} does not exist.")
        container = ContainerReader.load_from_disk(path)
        meta = OrderedDict(container.meta)
        found = meta.pop("kind", None)
        if found is None:
            raise DataError(f"{path} is not a checkpoint.")
        if kind is not None and found != kind:
            raise DataError(f"{path} is a {found} checkpoint, expected a {kind} checkpoint.")
        return cls(found, container.blobs, meta)
