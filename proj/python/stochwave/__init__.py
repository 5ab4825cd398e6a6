"""Staggered-grid stochastic wave solver and Carleman/stability estimators."""

import json as _json

from . import _core
from ._core import (  # noqa: F401
    BlowUp,
    ConfigError,
    CouplingError,
    Ensemble,
    Grid,
    InvalidArgument,
    MeshMismatch,
    ProblemData,
    RunConfig,
    SchemeCoefficients,
    StochwaveError,
    WeightOverflow,
    WeightParams,
    asymptotic_exprs,
    check_admissible,
    estimate_order,
    eval_weights,
    identity_residuals,
    parse_config,
    problem_data,
    run_ensemble,
    solve,
)


def carleman_terms(ensemble, weight, data, grid, kappa=0.0):
    """Carleman terms as a dict (lhs, rhs, stderr, ratio, ...)."""
    return _json.loads(_core.carleman_terms(ensemble, weight, data, grid, kappa))


def stability_terms(ens_a, ens_b, data_a, data_b, grid):
    return _json.loads(_core.stability_terms(ens_a, ens_b, data_a, data_b, grid))


def martingale_check(ensemble, grid):
    return _json.loads(_core.martingale_check(ensemble, grid))
