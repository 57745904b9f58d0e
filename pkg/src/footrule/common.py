"""Shared enums and exception types."""

from __future__ import annotations

import enum


class Statistic(enum.Enum):
    """The three statistics the package computes and simulates.

    FOOTRULE is the rank-based coefficient itself; DOUBLE_SUM is its
    approximation built from a double sum over independent uniforms;
    HAJEK is the projection of that approximation onto a sum of
    independent per-observation terms.

    The ``value`` strings are the labels used in CSV output.
    """

    FOOTRULE = "phi"
    DOUBLE_SUM = "phiprime"
    HAJEK = "phidprime"


class TiesError(ValueError):
    """Two equal values in a margin; ranking assumes continuous data."""


class NonFiniteError(ValueError):
    """NaN or infinity in the input."""


class SampleSizeError(ValueError):
    """Sample size outside the operation's supported range."""


class DegenerateSampleError(ValueError):
    """Sample has zero spread; no bandwidth can be formed."""


class BadVarianceError(ValueError):
    """Variance parameter is not strictly positive."""
