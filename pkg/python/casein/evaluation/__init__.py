# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.
from casein.evaluation.metrics import Correlation, cepstra, correlations, mcd
from casein.evaluation.proxy import band_proxies, intensity_proxy
from casein.evaluation.trace import ManifoldTrace, PcaProjection, pca_2d, tangent_period
from casein.evaluation.report import Report, analyze_manifold, evaluate, manifold_trace


__all__ = [
    "Correlation",
    "cepstra",
    "correlations",
    "mcd",
    "band_proxies",
    "intensity_proxy",
    "ManifoldTrace",
    "PcaProjection",
    "pca_2d",
    "tangent_period",
    "Report",
    "analyze_manifold",
    "evaluate",
    "manifold_trace",
]
