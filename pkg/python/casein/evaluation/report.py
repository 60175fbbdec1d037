# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

"""
Evaluation reports.

A report is a CSV file with one measurement per row::

    section,name,emotion,phoneme,metric,value

``section`` groups the measurements of one experiment, ``name`` is an utterance or a
recipe and ``phoneme`` is empty unless the value is about one phoneme. Aggregates are
in the ``aggregate`` section and the effective configuration in the ``config`` rows at
the end.
"""

import csv
import functools
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from casein.cascade.curves import RECIPES, CurveSpec
from casein.cascade.model import infer_from_curves
from casein.corpus.emotion import Emotion
from casein.corpus.renderer import Renderer
from casein.evaluation.metrics import Correlation, correlations, mcd
from casein.evaluation.proxy import intensity_proxy
from casein.evaluation.trace import pca_2d, tangent_period
from casein.storage import atomic_write
from casein.swer.distribution import predict_distribution


HEADER = ("section", "name", "emotion", "phoneme", "metric", "value")
RAMP_PATTERNS = ("ramp-up", "ramp-down")


def _format(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


class Report:
    """
    Rows of measurements, written as CSV.
    """

    def __init__(self, rows=None):
        self._rows = list(rows or [])

    @property
    def rows(self):
        return self._rows

    def __len__(self):
        return len(self._rows)

    def add(self, section, name, metric, value, emotion="", phoneme=""):
        self._rows.append((section, name, f"{emotion}", phoneme, metric, value))

    def extend(self, rows):
        self._rows.extend(rows)

    def add_config(self, name, config):
        """
        Echo a configuration as ``config`` rows.
        """
        for key, value in config.to_meta("").items():
            self.add("config", name, key, value)

    def values(self, section, metric, emotion=None):
        """
        :returns: The finite values of a metric, optionally for one emotion only.
        """
        found = []
        for row in self._rows:
            if row[0] != section or row[4] != metric:
                continue
            if emotion is not None and row[2] != f"{emotion}":
                continue
            value = float(row[5])
            if math.isfinite(value):
                found.append(value)
        return found

    def value(self, section, name, metric, emotion=None):
        """
        :returns: The value of a single measurement, or ``None``.
        """
        for row in self._rows:
            if row[:2] == (section, name) and row[4] == metric:
                if emotion is None or row[2] == f"{emotion}":
                    return row[5]
        return None

    def add_mean(self, section, metric, emotion="", name="mean"):
        """
        Add an ``aggregate`` row with the mean of a metric. Nothing is added when no
        finite value was measured.
        """
        values = self.values(section, metric, emotion if emotion != "" else None)
        if values:
            self.add("aggregate", name, f"{section}.{metric}", np.mean(values), emotion)

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(HEADER)
        for row in self._rows:
            writer.writerow([_format(value) for value in row])
        return buffer.getvalue()

    def save(self, path):
        atomic_write(path, self.to_csv())

    @classmethod
    def parse(cls, text):
        reader = csv.reader(io.StringIO(text))
        next(reader, None)
        return cls(tuple(row) for row in reader)


def _emotions(config):
    return [Emotion(index) for index in range(1, config.emotions)]


def _recipes(config):
    """
    Recipes whose ingredients all exist in the corpus.
    """
    return [
        (name, curves)
        for name, curves in RECIPES.items()
        if all(emotion < config.emotions for emotion in curves.curves)
    ]


def _correlate(measured, expected):
    # Utterances shorter than 3 phonemes have no meaningful correlation.
    if len(measured) < 3:
        return Correlation(math.nan, math.nan, False)
    return correlations(measured, expected)


def _correlation_rows(section, name, emotion, measured, expected):
    correlation = _correlate(measured, expected)
    return [
        (section, name, f"{emotion}", "", "pearson", correlation.pearson),
        (section, name, f"{emotion}", "", "spearman", correlation.spearman),
        (section, name, f"{emotion}", "", "defined", correlation.defined),
    ]


def restoration_rows(model, renderer, pair, explicit_model=None):
    """
    Restore an emotional utterance from the emotion distribution the recognizer
    predicts on it, and compare it to the original.
    """
    distribution = predict_distribution(pair.mel_emotional, pair.boundaries, model.recognizer)
    restored = model.infer(pair.phonemes, pair.speaker_id, distribution)
    emotion = pair.emotion
    rows = [("restoration", pair.name, f"{emotion}", "", "mcd", mcd(restored, pair.mel_emotional))]
    if explicit_model is not None:
        explicit = explicit_model.infer(
            pair.phonemes,
            pair.speaker_id,
            predict_distribution(pair.mel_emotional, pair.boundaries, explicit_model.recognizer),
        )
        rows.append(
            (
                "restoration",
                pair.name,
                f"{emotion}",
                "",
                "mcd_explicit",
                mcd(explicit, pair.mel_emotional),
            )
        )
    if emotion != Emotion.Neutral:
        proxy = intensity_proxy(restored, pair.boundaries, emotion, renderer)
        for index, (measured, expected) in enumerate(zip(proxy, pair.intensity)):
            rows.append(("restoration", pair.name, f"{emotion}", index, "proxy", measured))
            rows.append(("restoration", pair.name, f"{emotion}", index, "intensity", expected))
        rows.extend(_correlation_rows("restoration", pair.name, emotion, proxy, pair.intensity))
    return rows


def _commanded(model, pair, curves):
    mel, _ = infer_from_curves(pair.phonemes, pair.speaker_id, curves, model)
    return mel


def ramp_rows(model, renderer, pair):
    """
    Command every emotion from 0% to 100% and back over the utterance and correlate the
    measured intensity with the command.
    """
    rows = []
    count = len(pair.phonemes)
    for emotion in _emotions(model.corpus_config):
        for direction, (first, last) in (("up", (0.0, 1.0)), ("down", (1.0, 0.0))):
            curves = CurveSpec.ramp(emotion, first, last)
            mel = _commanded(model, pair, curves)
            proxy = intensity_proxy(mel, pair.boundaries, emotion, renderer)
            correlation = _correlate(proxy, curves.evaluate(emotion, count))
            rows.append(("ramp", pair.name, f"{emotion}", "", "spearman", correlation.spearman))
            rows.append(
                ("ramp", pair.name, f"{emotion}", "", f"spearman_{direction}", correlation.spearman)
            )
    return rows


def mixture_rows(model, renderer, pair):
    """
    Synthesize every mixed emotion recipe and each of its ingredients alone at full
    intensity, and measure the intensity of the ingredients. The mixture is also
    measured on each half of the utterance.
    """
    rows = []
    half = len(pair.phonemes) // 2
    for name, curves in _recipes(model.corpus_config):
        mel = _commanded(model, pair, curves)
        for emotion in curves.curves:
            proxy = intensity_proxy(mel, pair.boundaries, emotion, renderer)
            solo = _commanded(model, pair, CurveSpec({emotion: [(0.0, 1.0)]}))
            solo_proxy = intensity_proxy(solo, pair.boundaries, emotion, renderer)
            rows.extend(
                [
                    ("mixture", name, f"{emotion}", "", "proxy", np.mean(proxy)),
                    ("mixture", name, f"{emotion}", "", "solo", np.mean(solo_proxy)),
                    ("mixture", name, f"{emotion}", "", "first_half", np.mean(proxy[:half])),
                    ("mixture", name, f"{emotion}", "", "second_half", np.mean(proxy[half:])),
                ]
            )
    return rows


def conversion_rows(model, renderer, pair):
    """
    Convert every emotion into every other one over the utterance.
    """
    rows = []
    count = len(pair.phonemes)
    for source, target in itertools.permutations(_emotions(model.corpus_config), 2):
        curves = CurveSpec.conversion(source, target)
        mel = _commanded(model, pair, curves)
        label = f"{source}>{target}"
        for role, emotion in (("source", source), ("target", target)):
            proxy = intensity_proxy(mel, pair.boundaries, emotion, renderer)
            correlation = _correlate(proxy, curves.evaluate(emotion, count))
            rows.append(
                ("conversion", pair.name, label, "", f"spearman_{role}", correlation.spearman)
            )
    return rows


def manifold_trace(manifold, pair, quantized=False):
    """
    Trace of the manifold latents of an utterance.

    :param casein.manifold.ManifoldModel manifold: Trained manifold.
    :param UtterancePair pair: Utterance to encode.
    :param bool quantized: Trace the code vectors instead of the continuous latents.

    :returns: Tuple of the latents, their :class:`PcaProjection` and :class:`ManifoldTrace`.
    """
    training = manifold.training
    manifold.eval()
    try:
        latents = manifold.latents(pair.mel_emotional, pair.boundaries)
    finally:
        manifold.train(training)
    rows = latents.quantized.data if quantized else latents.pre_quant.data
    projection = pca_2d(rows)
    return latents, projection, tangent_period(projection.points)


def period_rows(manifold, pair, quantized=False):
    """
    Correlate the turning rate of the manifold trace of an utterance with its ground
    truth intensity.
    """
    _, _, trace = manifold_trace(manifold, pair, quantized)
    rows = _correlation_rows("period", pair.name, pair.emotion, trace.signal, pair.intensity)
    rows.append(("period", pair.name, f"{pair.emotion}", "", "smoothness", trace.smoothness))
    return rows


def _utterance_rows(model, renderer, explicit_model, pair):
    rows = restoration_rows(model, renderer, pair, explicit_model)
    rows.extend(ramp_rows(model, renderer, pair))
    rows.extend(mixture_rows(model, renderer, pair))
    rows.extend(conversion_rows(model, renderer, pair))
    if pair.pattern in RAMP_PATTERNS and len(pair.phonemes) >= 3:
        rows.extend(period_rows(model.manifold, pair))
    return rows


def _recipe_mean(report, name, emotion, metric):
    return np.mean(
        [
            float(row[5])
            for row in report.rows
            if row[:3] == ("mixture", name, f"{emotion}") and row[4] == metric
        ]
    )


def _aggregate(report, model):
    report.add_mean("restoration", "mcd")
    report.add_mean("restoration", "mcd_explicit")
    report.add_mean("restoration", "pearson")
    report.add_mean("restoration", "spearman")
    for emotion in _emotions(model.corpus_config):
        report.add_mean("ramp", "spearman", emotion)
        report.add_mean("ramp", "spearman_up", emotion)
        report.add_mean("ramp", "spearman_down", emotion)

    for name, curves in _recipes(model.corpus_config):
        means = {}
        for emotion in curves.curves:
            proxy = _recipe_mean(report, name, emotion, "proxy")
            solo = _recipe_mean(report, name, emotion, "solo")
            means[emotion] = proxy
            ratio = proxy / solo if solo > 0 else math.nan
            report.add("aggregate", name, "mixture.active_ratio", ratio, emotion)
        weights = {emotion: curves.evaluate(emotion, 1)[0] for emotion in curves.curves}
        by_weight = sorted(weights, key=weights.get)
        by_proxy = sorted(means, key=means.get)
        report.add("aggregate", name, "mixture.ordering_matches", by_weight == by_proxy)

    for source, target in itertools.permutations(_emotions(model.corpus_config), 2):
        label = f"{source}>{target}"
        report.add_mean("conversion", "spearman_source", label, name=label)
        report.add_mean("conversion", "spearman_target", label, name=label)
    report.add_mean("period", "pearson")
    magnitudes = [abs(value) for value in report.values("period", "pearson")]
    if magnitudes:
        report.add("aggregate", "mean", "period.abs_pearson", np.mean(magnitudes))
    report.add_mean("period", "smoothness")


def evaluate(model, dataset, explicit_model=None, workers=None, verbose=True):
    """
    Evaluate a trained cascade on a split.

    Every utterance is restored from its predicted emotion distribution and measured
    against the original. Its phonemes are also used to synthesize intensity ramps,
    mixed emotion recipes and emotion conversions, and the intensity measured on the
    results is compared to the commands. Utterances drawn with a ramp pattern also get
    the trace of their manifold latents correlated with their intensity.

    :param casein.cascade.CascadeModel model: Trained cascade.
    :param casein.corpus.Dataset dataset: Usually the test split.
    :param casein.cascade.CascadeModel explicit_model: Optional explicit only model,
        whose restoration MCD is reported next to the cascade's.
    :param int workers: Number of evaluation threads.

    :returns: :class:`Report`.
    """
    renderer = Renderer(dataset.config)
    model.eval()
    if explicit_model is not None:
        explicit_model.eval()
    measure = functools.partial(_utterance_rows, model, renderer, explicit_model)
    report = Report()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        for rows in tqdm(
            executor.map(measure, dataset),
            total=len(dataset),
            desc="Evaluating",
            disable=not verbose,
        ):
            report.extend(rows)
    _aggregate(report, model)
    report.add_config("casein", model.config)
    if explicit_model is not None:
        report.add_config("explicit", explicit_model.config)
    report.add_config("corpus", dataset.config)
    return report


def analyze_manifold(manifold, pair, quantized=False):
    """
    Project the manifold latents of an utterance on a plane and measure how the trace
    turns, phoneme by phoneme, next to the ground truth intensity.

    :returns: :class:`Report`.
    """
    latents, projection, trace = manifold_trace(manifold, pair, quantized)
    report = Report()
    name, emotion = pair.name, pair.emotion
    for index in range(len(trace.points)):
        x, y = trace.points[index]
        report.add("trace", name, "x", x, emotion, index)
        report.add("trace", name, "y", y, emotion, index)
        if index < len(trace.angles):
            report.add("trace", name, "angle", trace.angles[index], emotion, index)
        report.add("trace", name, "turn", trace.turns[index], emotion, index)
        report.add("trace", name, "period", trace.period[index], emotion, index)
        report.add("trace", name, "signal", trace.signal[index], emotion, index)
        report.add("trace", name, "intensity", pair.intensity[index], emotion, index)
        report.add("trace", name, "code", int(latents.indices[index]), emotion, index)
        report.add("trace", name, "repeated", trace.repeated[index], emotion, index)

    correlation = correlations(trace.signal, pair.intensity)
    report.add("summary", name, "pearson", correlation.pearson, emotion)
    report.add("summary", name, "spearman", correlation.spearman, emotion)
    report.add("summary", name, "defined", correlation.defined, emotion)
    report.add("summary", name, "smoothness", trace.smoothness, emotion)
    report.add("summary", name, "eigenvalue_1", projection.eigenvalues[0], emotion)
    report.add("summary", name, "eigenvalue_2", projection.eigenvalues[1], emotion)
    report.add("summary", name, "rank_deficient", projection.rank_deficient, emotion)
    report.add("summary", name, "latents", "quantized" if quantized else "continuous", emotion)
    report.add_config("manifold", manifold.config)
    report.add_config("corpus", manifold.corpus_config)
    return report
