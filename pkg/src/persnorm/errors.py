"""Exception and warning types shared across the pipeline.

Two branches matter to callers: ``InputError`` covers bad files, bad
config, and violated preconditions (CLI exit code 1), while
``NumericalError`` covers failures of the math itself (exit code 2).
"""

from __future__ import annotations


class PersnormError(Exception):
    """Base class for every error raised by this package."""


class InputError(PersnormError):
    """Bad input data, files, or configuration."""


class NumericalError(PersnormError):
    """The computation itself broke down (rank deficiency, zero variance, ...)."""


# ingest ------------------------------------------------------------------

class MalformedRow(InputError):
    """A CSV row failed to parse (bad date, bad number, missing field)."""


class NonPositivePrice(InputError):
    """A price was zero, negative, or not finite."""


class DuplicateDate(InputError):
    """The same date appears twice in one price file."""


class EmptyFile(InputError):
    """A CSV had no data rows."""


class TooShort(InputError):
    """A series or slice has too few observations for the operation."""


class EmptyIntersection(InputError):
    """The input price series share no common dates."""


# cloud -------------------------------------------------------------------

class NoFullWindow(InputError):
    """The panel is shorter than a single window under the chosen policy."""


class EmptySlice(InputError):
    """A window slice selects no rows."""


class LengthMismatch(InputError):
    """Two vectors that must have equal length do not."""


# persistence -------------------------------------------------------------

class UnsortedFiltration(InputError):
    """Filtration values decrease somewhere in the simplex list."""


class MissingFace(InputError):
    """A simplex appears before one of its faces (or the face is absent)."""


# norms / econ --------------------------------------------------------------

class ZeroVariance(NumericalError):
    """A vector that must vary is constant."""


class RankDeficient(NumericalError):
    """The regressor matrix does not have full column rank."""


class TooFewObservations(InputError):
    """Not enough rows to fit the requested regression."""


class MisalignedMonths(InputError):
    """Monthly series share no common months."""


# cli -----------------------------------------------------------------------

class IoError(InputError):
    """A file could not be read or written."""


class StageError(PersnormError):
    """Wraps an error with the pipeline stage it occurred in."""

    def __init__(self, stage: str, original: BaseException):
        self.stage = stage
        self.original = original
        super().__init__(f"[{stage}] {original}")


# warnings ------------------------------------------------------------------

class GeometricUndefined(UserWarning):
    """Geometric mean over a zero standard deviation; result set to 0."""


class PerfectFitWarning(UserWarning):
    """Residuals are exactly zero; standard errors are degenerate."""
