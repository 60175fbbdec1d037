# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.


class CaseinError(RuntimeError):
    """
    Base class of every error raised by this package.
    """


class ConfigurationError(CaseinError):
    """
    Raised when a value, a shape or a length does not match what an operation expects.
    """


class DataError(CaseinError):
    """
    Raised when a file on disk can't be read or written, or is not in the expected format.
    """


class MissingArtifactError(CaseinError):
    """
    Raised when a checkpoint or a dataset required by a command is missing.
    """


class DivergenceError(CaseinError):
    """
    Raised when a loss or a gradient stops being finite.
    """
