# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.
from casein.swer.windows import WindowedSlice, slice_windows, window_range
from casein.swer.model import PredD
from casein.swer.distribution import EmotionDistribution, predict_distribution
from casein.swer.trainer import SwerTrainer, train_swer, window_accuracy, window_samples


__all__ = [
    "WindowedSlice",
    "slice_windows",
    "window_range",
    "PredD",
    "EmotionDistribution",
    "predict_distribution",
    "SwerTrainer",
    "train_swer",
    "window_accuracy",
    "window_samples",
]
