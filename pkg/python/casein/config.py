# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

"""
Run and corpus configuration.

Both are flat text files of ``key = value`` lines. Blank lines and lines starting with
``#`` are ignored. Values given on the command line override the ones from the file.
"""

import os
from collections import OrderedDict

from casein.errors import ConfigurationError, DataError


def _parse_bool(text):
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"'{text}' is not a boolean")


def _parse_band(text):
    if isinstance(text, (tuple, list)):
        start, end = (int(v) for v in text)
    else:
        start, sep, end = str(text).partition(":")
        if not sep:
            raise ValueError(f"'{text}' is not a start:end channel range")
        start, end = int(start), int(end)
    if end <= start:
        raise ValueError(f"band {text} is empty")
    return start, end


def _read_text(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise DataError(f"Could not read configuration {path}: {e.strerror or e}") from e


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return f"{value[0]}:{value[1]}"
    return repr(value) if isinstance(value, float) else str(value)


class FlatConfig:
    """
    Base class of the configurations.

    Derived classes list their fields in ``FIELDS``, an ordered mapping of field names to
    ``(parser, default)`` pairs. Every field becomes an attribute.
    """

    FIELDS = OrderedDict()

    def __init__(self, **values):
        """
        :param values: Field values overriding the defaults.
        """
        self._values = OrderedDict((name, default) for name, (_, default) in self.FIELDS.items())
        self.update(values)

    def __getattr__(self, name):
        # Only called when regular lookup fails.
        values = self.__dict__.get("_values")
        if values is not None and name in values:
            return values[name]
        raise AttributeError(f"{self.__class__.__name__} has no field '{name}'.")

    def __eq__(self, other):
        return type(self) is type(other) and self._values == other._values

    def update(self, values):
        """
        Override fields.

        :param dict values: Field values. ``None`` values are ignored, strings are parsed.

        :raises ConfigurationError: If a field is unknown or a value can't be parsed.
        """
        for name, value in values.items():
            if value is None:
                continue
            if name not in self.FIELDS:
                raise ConfigurationError(f"Unknown configuration field '{name}'.")
            parser = self.FIELDS[name][0]
            try:
                self._values[name] = parser(value)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"Invalid value for '{name}': {e}") from e
        self.validate()
        return self

    def copy(self, **overrides):
        """
        :returns: A new configuration with the same values, except for ``overrides``.
        """
        return self.__class__(**dict(self._values)).update(overrides)

    def validate(self):
        """
        Implemented by derived classes to check values against each other.
        """

    def items(self):
        return self._values.items()

    def to_text(self):
        """
        :returns: The configuration in the flat text format.
        """
        return "".join(f"{name} = {_format_value(value)}\n" for name, value in self.items())

    def to_meta(self, prefix="config."):
        """
        :returns: Ordered dictionary of ``<prefix><field>`` keys to text values, for
            echoing the configuration into checkpoints and reports.
        """
        return OrderedDict((prefix + name, _format_value(value)) for name, value in self.items())

    @classmethod
    def parse_text(cls, text, path=None):
        """
        Parse the flat text format into raw string values.

        :returns: Ordered dictionary of field names to strings.
        """
        values = OrderedDict()
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                where = f"{path}:{number}" if path else f"line {number}"
                raise ConfigurationError(f"Expected 'key = value' at {where}, got '{line}'.")
            values[key.strip()] = value.strip()
        return values

    @classmethod
    def from_text(cls, text, path=None, **overrides):
        config = cls()
        config.update(cls.parse_text(text, path))
        return config.update(overrides)

    @classmethod
    def from_file(cls, path, **overrides):
        """
        Read a configuration file.

        :param str path: Path to the file. If ``None``, only defaults and overrides are used.
        :param overrides: Values taking precedence over the file.
        """
        if path is None:
            return cls(**overrides)
        return cls.from_text(_read_text(path), path, **overrides)

    @classmethod
    def from_meta(cls, meta, prefix="config."):
        """
        Rebuild a configuration echoed with :meth:`to_meta`. Unknown keys are ignored.
        """
        values = {
            key[len(prefix) :]: value
            for key, value in meta.items()
            if key.startswith(prefix) and key[len(prefix) :] in cls.FIELDS
        }
        return cls(**values)


class RunConfig(FlatConfig):
    """
    Configuration shared by the training and inference commands.
    """

    FIELDS = OrderedDict(
        [
            ("seed", (int, 0)),
            ("data_dir", (str, os.environ.get("CASEIN_DATA", "data"))),
            ("epochs", (int, 100)),
            ("batch_size", (int, 16)),
            ("lr", (float, 5e-4)),
            ("beta1", (float, 0.9)),
            ("beta2", (float, 0.98)),
            ("epsilon", (float, 1e-8)),
            ("lambda_imp", (float, 0.1)),
            ("radius", (int, 2)),
            ("codebook_size", (int, 256)),
            ("codebook_dim", (int, 512)),
            ("hidden", (int, 256)),
            ("kernel", (int, 9)),
            ("dropout", (float, 0.2)),
            ("commitment", (float, 0.25)),
            ("residual_blocks", (int, 4)),
            ("leaky_slope", (float, 0.1)),
            ("detach_synthesis", (_parse_bool, False)),
            ("zero_init_generator", (_parse_bool, False)),
            ("explicit_only", (_parse_bool, False)),
            ("verbose", (_parse_bool, True)),
        ]
    )

    def validate(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ConfigurationError("epochs and batch_size must be at least 1.")
        if self.radius < 0:
            raise ConfigurationError(f"Window radius must be >= 0, got {self.radius}.")
        if self.kernel % 2 == 0:
            raise ConfigurationError(f"Kernel size must be odd, got {self.kernel}.")
        if not 0 <= self.dropout < 1:
            raise ConfigurationError(f"Dropout must be in [0, 1), got {self.dropout}.")
        if self.codebook_size < 1 or self.codebook_dim < 1 or self.hidden < 1:
            raise ConfigurationError("Model sizes must be positive.")


class CorpusConfig(FlatConfig):
    """
    Configuration of the synthetic corpus.

    Phoneme spectral envelopes live in channels ``[0, formant_channels)``; every emotion
    modulates its own band above that.
    """

    FIELDS = OrderedDict(
        [
            ("seed", (int, 0)),
            ("train", (int, 200)),
            ("val", (int, 20)),
            ("test", (int, 30)),
            ("min_phonemes", (int, 6)),
            ("max_phonemes", (int, 12)),
            ("min_duration", (int, 4)),
            ("max_duration", (int, 16)),
            ("vocab", (int, 20)),
            ("speakers", (int, 4)),
            ("emotions", (int, 5)),
            ("channels", (int, 80)),
            ("formant_channels", (int, 40)),
            ("noise", (float, 0.01)),
            ("amplitude", (float, 0.3)),
            ("band.happy", (_parse_band, (40, 50))),
            ("band.sad", (_parse_band, (50, 60))),
            ("band.angry", (_parse_band, (60, 70))),
            ("band.surprised", (_parse_band, (70, 80))),
            ("frequency.happy", (float, 0.25)),
            ("frequency.sad", (float, 0.2)),
            ("frequency.angry", (float, 1 / 3)),
            ("frequency.surprised", (float, 0.4)),
        ]
    )

    def __getitem__(self, name):
        return self._values[name]

    def validate(self):
        if min(self.train, self.val, self.test) < 0:
            raise ConfigurationError("Split sizes can't be negative.")
        if not 1 <= self.min_phonemes <= self.max_phonemes:
            raise ConfigurationError("Phoneme counts must satisfy 1 <= min <= max.")
        if not 1 <= self.min_duration <= self.max_duration:
            raise ConfigurationError("Durations must satisfy 1 <= min <= max.")
        if not 2 <= self.emotions <= 5:
            raise ConfigurationError(
                f"Between 2 and 5 emotions are supported, got {self.emotions}."
            )
        if self.vocab < 1 or self.speakers < 1:
            raise ConfigurationError("vocab and speakers must be positive.")
        if not 0 < self.formant_channels <= self.channels:
            raise ConfigurationError("formant_channels must be in (0, channels].")
        bands = sorted(value for name, value in self.items() if name.startswith("band."))
        for start, end in bands:
            if start < self.formant_channels or end > self.channels:
                raise ConfigurationError(
                    f"Emotion band {start}:{end} must lie in [{self.formant_channels}, "
                    f"{self.channels})."
                )
        for (_, end), (start, _) in zip(bands, bands[1:]):
            if start < end:
                raise ConfigurationError("Emotion bands must not overlap.")
        if self.noise < 0 or self.amplitude <= 0:
            raise ConfigurationError("noise must be >= 0 and amplitude > 0.")

    def band(self, emotion):
        """
        :returns: ``(start, end)`` channel range modulated by an emotion.
        """
        return self._emotion_value("band", emotion)

    def frequency(self, emotion):
        """
        :returns: Modulation frequency of an emotion, in cycles per frame.
        """
        return self._emotion_value("frequency", emotion)

    def _emotion_value(self, prefix, emotion):
        key = f"{prefix}.{getattr(emotion, 'key', emotion)}"
        if key not in self._values:
            raise ConfigurationError(
                f"Emotion {emotion} has no {prefix} in the corpus configuration."
            )
        return self._values[key]


CORPUS_PREFIX = "corpus."


def combined_text(config, corpus_config):
    """
    Both configurations in one flat text file. Corpus keys are prefixed with
    ``corpus.``.
    """
    return config.to_text() + "".join(
        f"{key} = {value}\n" for key, value in corpus_config.to_meta(CORPUS_PREFIX).items()
    )


def load_configs(path=None, overrides=None, corpus_overrides=None):
    """
    Read a file written with :func:`combined_text`, or a subset of it.

    The corpus is seeded with the run seed unless its seed is set explicitly.

    :param str path: Configuration file. Optional.
    :param dict overrides: Run values taking precedence over the file.
    :param dict corpus_overrides: Corpus values taking precedence over the file.

    :returns: Tuple of the :class:`RunConfig` and the :class:`CorpusConfig`.
    """
    values = FlatConfig.parse_text(_read_text(path), path) if path else {}
    corpus_values = {
        key[len(CORPUS_PREFIX) :]: value
        for key, value in values.items()
        if key.startswith(CORPUS_PREFIX)
    }
    config = RunConfig(
        **{key: value for key, value in values.items() if not key.startswith(CORPUS_PREFIX)}
    ).update(overrides or {})
    corpus_overrides = dict(corpus_overrides or {})
    if "seed" not in corpus_values and corpus_overrides.get("seed") is None:
        corpus_overrides["seed"] = config.seed
    corpus_config = CorpusConfig(**corpus_values).update(corpus_overrides)
    return config, corpus_config
