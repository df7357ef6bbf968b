#!/usr/bin/python3.10
########################################################################################
# __utils__.py - Utility module for sepscope.                                          #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 22/02/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
__utils__.py - The utility module for sepscope.

Holds the keywords, numerical tolerances and exception classes shared across the
package, along with the logging set-up used by the command-line interface.

"""

import logging
import sys

__all__ = (
    "AlwaysDetectsError",
    "ArgumentError",
    "BISECTION_TOLERANCE",
    "COARSE_GRID_SIZE",
    "COMPLETENESS_TOLERANCE",
    "ConfigurationError",
    "DegenerateSpectrumError",
    "DETECTION_TOLERANCE",
    "DimensionMismatchError",
    "FIT_POINTS",
    "get_logger",
    "HERMITICITY_TOLERANCE",
    "IncompatibleCountsError",
    "InvalidDensityMatrixError",
    "InvalidDimensionError",
    "InvalidPartitionError",
    "LOG_FORMAT",
    "LOGGER_NAME",
    "NAME",
    "NeverDetectsError",
    "NonHermitianError",
    "NonSquareError",
    "NoSignChangeError",
    "NumericalError",
    "ParamOutOfRangeError",
    "PSD_TOLERANCE",
    "RELATION_TOLERANCE",
    "ShapeMismatchError",
    "T_RANGE_SLACK",
    "TOutOfRangeError",
    "TRACE_TOLERANCE",
    "UnknownFixtureError",
    "UnknownKindError",
    "UnknownTargetError",
    "ValidationFailedError",
)

# BISECTION_TOLERANCE:
#   The default width below which a threshold bracket is considered resolved.
BISECTION_TOLERANCE: float = 1e-7

# COARSE_GRID_SIZE:
#   The default number of points used to locate sign changes of a margin curve.
COARSE_GRID_SIZE: int = 101

# COMPLETENESS_TOLERANCE:
#   The entrywise tolerance on sum_k E_{alpha,k} = I.
COMPLETENESS_TOLERANCE: float = 1e-12

# DETECTION_TOLERANCE:
#   The amount by which a margin must exceed zero to be reported as a detection.
DETECTION_TOLERANCE: float = 1e-9

# FIT_POINTS:
#   The number of samples used for the affine fit over the detected side.
FIT_POINTS: int = 11

# HERMITICITY_TOLERANCE:
#   The entrywise tolerance on |m - m^dagger|.
HERMITICITY_TOLERANCE: float = 1e-12

# LOGGER_NAME:
#   The name of the package logger, under which every module logger sits.
LOGGER_NAME: str = __name__.rsplit(".", 1)[0]

# LOG_FORMAT:
#   The format used for log records.
LOG_FORMAT: str = "%(asctime)s: %(name)s: %(levelname)s: %(message)s"

# NAME:
#   Keyword for parsing the name.
NAME: str = "name"

# PSD_TOLERANCE:
#   Eigenvalues above minus this value count as non-negative.
PSD_TOLERANCE: float = 1e-10

# RELATION_TOLERANCE:
#   The tolerance on the defining trace relations of a symmetric POVM.
RELATION_TOLERANCE: float = 1e-10

# T_RANGE_SLACK:
#   The slack allowed when checking that t lies within its admissible interval.
T_RANGE_SLACK: float = 1e-12

# TRACE_TOLERANCE:
#   The tolerance on the unit trace of a density matrix.
TRACE_TOLERANCE: float = 1e-12


class ConfigurationError(Exception):
    """Raised when the inputs to a calculation are invalid. Maps to exit code 2."""


class NumericalError(Exception):
    """Raised when a numerical check or convergence fails. Maps to exit code 3."""


class ArgumentError(ConfigurationError):
    """Raised when incorrect command-line arguments are passed in."""

    def __init__(self, msg: str) -> None:
        """Instantiate with the message `msg`."""

        super().__init__(f"Incorrect CLI arguments: {msg}")


class DimensionMismatchError(ConfigurationError):
    """Raised when subsystem dimensions do not match a matrix or measurement."""


class IncompatibleCountsError(ConfigurationError):
    """Raised when N(M - 1) differs from d^2 - 1."""


class InvalidDensityMatrixError(ConfigurationError):
    """Raised when a matrix fails the density-matrix invariants."""


class InvalidDimensionError(ConfigurationError):
    """Raised when a Hilbert-space dimension is below two."""


class InvalidPartitionError(ConfigurationError):
    """Raised when a bipartition does not partition the subsystems."""


class NonSquareError(ConfigurationError):
    """Raised when a square matrix is required but not supplied."""


class ParamOutOfRangeError(ConfigurationError):
    """Raised when a state-family parameter lies outside its domain."""


class ShapeMismatchError(ConfigurationError):
    """Raised when block shapes of an augmented matrix do not agree."""


class TOutOfRangeError(ConfigurationError):
    """Raised when the POVM interpolation parameter t lies outside its range."""


class UnknownFixtureError(ConfigurationError):
    """Raised when an unknown basis-grouping scheme is requested."""


class UnknownKindError(ConfigurationError):
    """Raised when an unknown measurement or criterion kind is requested."""


class UnknownTargetError(ConfigurationError):
    """Raised when an unknown reproduction target is requested."""


class DegenerateSpectrumError(NumericalError):
    """Raised when the H operators have no positive or no negative eigenvalue."""


class NonHermitianError(NumericalError):
    """Raised when a matrix expected to be Hermitian is not."""


class ValidationFailedError(NumericalError):
    """Raised when a constructed POVM violates its defining relations."""

    def __init__(self, msg: str, report) -> None:
        """
        Instantiate with the message `msg` and the failing report.

        Inputs:
            - msg:
                The message to display.
            - report:
                The :class:`ValidationReport` detailing the residuals.

        """

        super().__init__(msg)
        self.report = report


class NoSignChangeError(NumericalError):
    """Raised when a margin curve does not change sign over the scanned range."""


class NeverDetectsError(NoSignChangeError):
    """Raised when a criterion detects nowhere on the scanned range."""


class AlwaysDetectsError(NoSignChangeError):
    """Raised when a criterion detects everywhere on the scanned range."""


def get_logger(verbose: bool = False, log_file: str | None = None) -> logging.Logger:
    """
    Configure and return the package's root logger.

    Handlers are only attached once so that repeated CLI invocations within one
    interpreter, e.g., from the tests, do not duplicate records.

    Inputs:
        - verbose:
            Whether to emit debug records to the console.
        - log_file:
            If provided, the path of a file to which all records are also written.

    Returns:
        The configured logger.

    """

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)

    console_level = logging.DEBUG if verbose else logging.WARNING
    console_handlers = [
        handler
        for handler in logger.handlers
        if isinstance(handler, logging.StreamHandler)
        and not isinstance(handler, logging.FileHandler)
    ]
    if len(console_handlers) == 0:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(console_handler)
        console_handlers.append(console_handler)
    for handler in console_handlers:
        handler.setLevel(console_level)

    if log_file is not None and not any(
        isinstance(handler, logging.FileHandler)
        and handler.baseFilename.endswith(log_file)
        for handler in logger.handlers
    ):
        file_handler = logging.FileHandler(log_file, encoding="UTF-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        file_handler.setLevel(logging.DEBUG)
        logger.addHandler(file_handler)

    return logger
