"""Python access to the fat-tailed kinetic solver."""

import json

from ._fattail import (
    ConfigError,
    DomainError,
    FitError,
    Model,
    RegimeError,
    coefficients,
    equilibrium,
    evolve_mode,
    fit_rate,
    grid,
    nash_profile,
    operator_matrix,
    predicted_rate,
)
from ._fattail import simulate as _simulate
from ._fattail import verify as _verify


def simulate(config=None):
    """Run a space-velocity simulation; config is a dict following the JSON schema."""
    return _simulate(json.dumps(config or {}))


def verify(config=None, n=400):
    """Run the invariant battery and return the parsed report."""
    return json.loads(_verify(json.dumps(config or {}), n))


__all__ = [
    "ConfigError",
    "DomainError",
    "FitError",
    "Model",
    "RegimeError",
    "coefficients",
    "equilibrium",
    "evolve_mode",
    "fit_rate",
    "grid",
    "nash_profile",
    "operator_matrix",
    "predicted_rate",
    "simulate",
    "verify",
]
