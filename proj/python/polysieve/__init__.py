"""Orthogonal-series sieve priors for density estimation."""

import json

from ._polysieve import (
    HARDY_CONSTANT,
    CapabilityError,
    InputError,
    NumericError,
    cli,
    derivative_coeffs,
    draw,
    eval,
    gamma,
    gamma_tilde,
    gauss_rule,
    hardy_check,
    hellinger_sq,
    k_n,
    log_gamma,
    theoretical_sigmas,
    weight,
)
from ._polysieve import run_experiment as _run_experiment


def run_experiment(experiment_id, **kwargs):
    """Runs an experiment and returns its report as a dict."""
    return json.loads(_run_experiment(experiment_id, **kwargs))


__all__ = [
    "HARDY_CONSTANT",
    "CapabilityError",
    "InputError",
    "NumericError",
    "cli",
    "derivative_coeffs",
    "draw",
    "eval",
    "gamma",
    "gamma_tilde",
    "gauss_rule",
    "hardy_check",
    "hellinger_sq",
    "k_n",
    "log_gamma",
    "run_experiment",
    "theoretical_sigmas",
    "weight",
]
