# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.
from casein.numerics.tensor import Tensor, Parameter, Tape, shadow_precision, check_finite
from casein.numerics import functional
from casein.numerics.functional import conv1d, avg_pool_segments, expand_segments
from casein.numerics.losses import mse_loss, bce_elementwise, mean_row_distance, squared_error
from casein.numerics.optim import Adam, AdamState, adam_step, lr_linear_decay
from casein.numerics.checkpoint import Checkpoint
from casein.numerics.gradcheck import gradcheck


__all__ = [
    "Tensor",
    "Parameter",
    "Tape",
    "shadow_precision",
    "check_finite",
    "functional",
    "conv1d",
    "avg_pool_segments",
    "expand_segments",
    "mse_loss",
    "bce_elementwise",
    "mean_row_distance",
    "squared_error",
    "Adam",
    "AdamState",
    "adam_step",
    "lr_linear_decay",
    "Checkpoint",
    "gradcheck",
]
