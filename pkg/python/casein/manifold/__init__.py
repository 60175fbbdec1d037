# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.
from casein.manifold.codebook import Codebook, ManifoldLatents, quantize
from casein.manifold.modules import (
    ConditionBundle,
    LinguisticExtractor,
    PredM,
    SpeakerTable,
    VQDecoder,
)
from casein.manifold.model import ManifoldModel, codebook_usage
from casein.manifold.trainer import ManifoldTrainer, train_manifold


__all__ = [
    "Codebook",
    "ManifoldLatents",
    "quantize",
    "ConditionBundle",
    "LinguisticExtractor",
    "PredM",
    "SpeakerTable",
    "VQDecoder",
    "ManifoldModel",
    "codebook_usage",
    "ManifoldTrainer",
    "train_manifold",
]
