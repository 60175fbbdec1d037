# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import numpy as np

from casein.errors import ConfigurationError
from casein.numerics import functional as F
from casein.numerics.layers import Module
from casein.numerics.tensor import Parameter, check_finite


class Codebook(Module):
    """
    Learned code vectors the emotion manifold is quantized onto.

    Vectors start uniform in ``[-1/sqrt(d), 1/sqrt(d)]``. The codebook also counts how
    many rows were assigned to each code since the counts were last reset.
    """

    def __init__(self, size, dim, rng):
        """
        :param int size: Number of codes.
        :param int dim: Dimension of a code.
        :param numpy.random.Generator rng: Initialization source.
        """
        super().__init__()
        bound = 1 / np.sqrt(dim)
        self.vectors = Parameter(rng.uniform(-bound, bound, size=(size, dim)))
        self._usage = np.zeros(size, dtype=np.int64)

    @property
    def size(self):
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]

    @property
    def usage(self):
        """
        Number of rows assigned to every code.
        """
        return self._usage

    @usage.setter
    def usage(self, counts):
        self._usage = np.asarray(counts, dtype=np.int64).reshape(self.size)

    def record_usage(self, indices):
        np.add.at(self._usage, indices, 1)

    def reset_usage(self):
        self._usage[:] = 0

    def nearest(self, rows):
        """
        Index of the closest code of every row, by Euclidean distance. Ties go to the
        smallest index.

        :param rows: ``count x dim`` array.

        :returns: ``numpy`` vector of indices.
        """
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != self.dim:
            raise ConfigurationError(
                f"Can't quantize rows of shape {rows.shape} with {self.dim}-d codes."
            )
        vectors = self.vectors.data.astype(np.float64)
        indices = np.empty(len(rows), dtype=np.int64)
        for row_index, row in enumerate(rows):
            difference = vectors - row
            # argmin returns the first minimum.
            indices[row_index] = np.argmin(np.sum(difference * difference, axis=1))
        return indices

    def reseed_dead(self, candidates, rng):
        """
        Move every code that was never used onto a random candidate row.

        :param candidates: ``count x dim`` rows to draw from, usually encoder outputs.
        :param numpy.random.Generator rng: Random source.

        :returns: Number of codes reseeded.
        """
        dead = np.flatnonzero(self._usage == 0)
        candidates = np.asarray(candidates)
        if len(dead) == 0 or len(candidates) == 0:
            return 0
        picks = rng.choice(len(candidates), size=len(dead), replace=len(candidates) < len(dead))
        vectors = self.vectors.data.copy()
        vectors[dead] = candidates[picks]
        self.vectors.data = vectors
        return len(dead)


class ManifoldLatents:
    """
    Continuous and quantized latents of an utterance, one row per phoneme.

    ``quantized`` carries the code vectors forward and passes its gradient straight
    through to ``pre_quant``. ``codes`` carries the same values but its gradient flows
    into the codebook.
    """

    __slots__ = ("pre_quant", "indices", "quantized", "codes")

    def __init__(self, pre_quant, indices, quantized, codes):
        self.pre_quant = pre_quant
        self.indices = indices
        self.quantized = quantized
        self.codes = codes

    def __len__(self):
        return len(self.indices)


def quantize(pre_quant, codebook):
    """
    Snap every row to its nearest code.

    :param Tensor pre_quant: ``t x d`` continuous latents.
    :param Codebook codebook: Codebook to quantize with.

    :returns: :class:`ManifoldLatents`.
    """
    check_finite(pre_quant, "the latents to quantize")
    indices = codebook.nearest(pre_quant.data)
    codes = F.embedding(codebook.vectors, indices)
    quantized = F.straight_through(pre_quant, codes.data)
    return ManifoldLatents(pre_quant, indices, quantized, codes)
