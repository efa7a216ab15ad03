"""Minimum error entropy estimation on symmetric unimodal mixtures."""

import json

from ._core import (
    ConfigError,
    Family,
    NumericalError,
    ParameterError,
    convergence,
    error_pdf,
    optimize,
    rearrange,
    risk,
    self_test,
    theorem_gap,
    verify,
)

__all__ = [
    "ConfigError",
    "Family",
    "NumericalError",
    "ParameterError",
    "convergence",
    "error_pdf",
    "family",
    "optimize",
    "rearrange",
    "risk",
    "self_test",
    "theorem_gap",
    "verify",
]


def family(spec):
    """Build a Family from a dict or a JSON string."""
    return Family(spec if isinstance(spec, str) else json.dumps(spec))
