# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.
from casein.cascade.curves import RECIPES, CurveSpec, recipe
from casein.cascade.model import (
    Adapter,
    CascadeModel,
    FrozenTargets,
    GeneratedManifold,
    Generator,
    Synthesizer,
    infer_from_curves,
    loss_imp,
)
from casein.cascade.trainer import CascadeTrainer, quantized_distance, train_casein


__all__ = [
    "RECIPES",
    "CurveSpec",
    "recipe",
    "Adapter",
    "CascadeModel",
    "FrozenTargets",
    "GeneratedManifold",
    "Generator",
    "Synthesizer",
    "infer_from_curves",
    "loss_imp",
    "CascadeTrainer",
    "quantized_distance",
    "train_casein",
]
