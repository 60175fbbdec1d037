# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.
__version__ = "0.1.0"

from casein.config import CorpusConfig, RunConfig
from casein.errors import (
    CaseinError,
    ConfigurationError,
    DataError,
    DivergenceError,
    MissingArtifactError,
)


__all__ = [
    "__version__",
    "CorpusConfig",
    "RunConfig",
    "CaseinError",
    "ConfigurationError",
    "DataError",
    "DivergenceError",
    "MissingArtifactError",
]
