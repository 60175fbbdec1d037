# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

"""
Geometry of a manifold trace: the sequence of per phoneme latents of an utterance,
projected on its two principal axes, and how fast its direction turns.
"""

import math

import numpy as np

from casein.errors import ConfigurationError


PERIOD_EPSILON = 1e-6
POWER_TOLERANCE = 1e-9
POWER_MAX_ITERATIONS = 10000
# Eigenvalues below this fraction of the total variance are considered zero.
RANK_TOLERANCE = 1e-10


class PcaProjection:
    """
    Latents projected on their two principal axes.
    """

    __slots__ = ("points", "components", "eigenvalues", "rank_deficient")

    def __init__(self, points, components, eigenvalues, rank_deficient):
        self.points = points
        self.components = components
        self.eigenvalues = eigenvalues
        self.rank_deficient = rank_deficient


def _sign_convention(vector):
    nonzero = np.flatnonzero(np.abs(vector) > 1e-12)
    if len(nonzero) and vector[nonzero[0]] < 0:
        return -vector
    return vector


def _power_iteration(matrix, rng, tolerance, max_iterations):
    vector = rng.normal(size=matrix.shape[0])
    vector /= np.linalg.norm(vector)
    for _ in range(max_iterations):
        product = matrix @ vector
        norm = np.linalg.norm(product)
        if norm == 0:
            return 0.0, np.zeros_like(vector)
        product /= norm
        converged = np.linalg.norm(product - vector) < tolerance
        vector = product
        if converged:
            break
    return float(vector @ matrix @ vector), vector


def pca_2d(latents, tolerance=POWER_TOLERANCE, max_iterations=POWER_MAX_ITERATIONS):
    """
    Project latents on the two leading eigenvectors of their covariance, found by power
    iteration with deflation.

    The first non zero entry of each eigenvector is positive. When the covariance has
    less than two non zero eigenvalues, the missing coordinates are 0 and the projection
    is flagged as rank deficient.

    :param latents: ``t x d`` matrix, ``t >= 3``.

    :returns: :class:`PcaProjection`.
    """
    latents = np.asarray(latents, dtype=np.float64)
    if latents.ndim != 2 or latents.shape[0] < 3:
        raise ConfigurationError(f"PCA needs at least 3 rows, got shape {latents.shape}.")
    if latents.shape[1] < 2:
        raise ConfigurationError("PCA to 2 dimensions needs at least 2 columns.")
    centered = latents - latents.mean(axis=0)
    covariance = centered.T @ centered / latents.shape[0]
    threshold = RANK_TOLERANCE * max(np.trace(covariance), np.finfo(np.float64).tiny)

    rng = np.random.default_rng(0)
    components = np.zeros((2, latents.shape[1]))
    eigenvalues = np.zeros(2)
    rank_deficient = False
    deflated = covariance
    for index in range(2):
        eigenvalue, vector = _power_iteration(deflated, rng, tolerance, max_iterations)
        if eigenvalue <= threshold:
            rank_deficient = True
            break
        components[index] = _sign_convention(vector)
        eigenvalues[index] = eigenvalue
        deflated = deflated - eigenvalue * np.outer(vector, vector)
    return PcaProjection(centered @ components.T, components, eigenvalues, rank_deficient)


def _wrap(angle):
    # To (-pi, pi].
    return math.pi - (math.pi - angle) % (2 * math.pi)


class ManifoldTrace:
    """
    2-D trace and its turning rate.

    ``angles`` holds the direction of each of the ``len(points) - 1`` steps. Every point
    has a turning angle, a period proxy ``2 pi / (|turn| + epsilon)`` and the negated
    min-max normalized period, which rises where the trace curls. End points copy their
    interior neighbour. ``repeated`` flags the points whose turn reuses the previous one
    because an adjacent step has zero length.
    """

    __slots__ = ("points", "angles", "turns", "period", "signal", "repeated")

    def __init__(self, points, angles, turns, period, signal, repeated):
        self.points = points
        self.angles = angles
        self.turns = turns
        self.period = period
        self.signal = signal
        self.repeated = repeated

    @property
    def smoothness(self):
        """
        Mean absolute turning angle of the interior points.
        """
        return float(np.mean(np.abs(self.turns[1:-1])))


def tangent_period(points, epsilon=PERIOD_EPSILON):
    """
    Compute the tangent angles of a 2-D trace and the period proxy of each point.

    :param points: ``n x 2`` points, ``n >= 3``.

    :returns: :class:`ManifoldTrace`.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 3:
        raise ConfigurationError(f"A trace is at least 3 points in 2-D, got {points.shape}.")
    steps = np.diff(points, axis=0)
    moving = np.any(steps != 0, axis=1)
    if not np.any(moving):
        raise ConfigurationError("The trace never moves.")

    angles = np.arctan2(steps[:, 1], steps[:, 0])
    # A zero step has no direction: it keeps the previous one, or the first defined one.
    last = angles[np.argmax(moving)]
    for index in range(len(angles)):
        if moving[index]:
            last = angles[index]
        else:
            angles[index] = last

    count = len(points)
    turns = np.zeros(count)
    repeated = np.zeros(count, dtype=bool)
    previous = 0.0
    for index in range(1, count - 1):
        if moving[index - 1] and moving[index]:
            previous = _wrap(angles[index] - angles[index - 1])
        else:
            repeated[index] = True
        turns[index] = previous
    turns[0], turns[-1] = turns[1], turns[-2]

    period = 2 * math.pi / (np.abs(turns) + epsilon)
    negated = -period
    spread = np.ptp(negated)
    signal = (negated - negated.min()) / spread if spread > 0 else np.zeros(count)
    return ManifoldTrace(points, angles, turns, period, signal, repeated)
