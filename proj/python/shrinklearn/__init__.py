"""Learned shrinkage functions for unrolled ISTA.

The heavy lifting lives in the C++ extension ``shrinklearn._core``; this
package re-exports its public surface.
"""

from ._core import (
    DivergenceError,
    Instance,
    IterateTrace,
    NumericalError,
    Problem,
    SplineNonlinearity,
    TrainReport,
    __version__,
    bspline2,
    bspline3,
    build_problem,
    cost,
    eval_phi,
    eval_phi_prime,
    finite_difference_gradient,
    fista_lasso,
    fit_soft_threshold,
    generate_dataset,
    genie_mmse,
    gradient,
    ista_forward,
    lasso_objective,
    load_dataset,
    load_model,
    max_relative_error,
    project_coefficients,
    save_dataset,
    save_model,
    snr_db,
    soft_threshold,
    soft_threshold_ista,
    train,
    tune_lasso_lambda,
)

__all__ = [
    "DivergenceError",
    "Instance",
    "IterateTrace",
    "NumericalError",
    "Problem",
    "SplineNonlinearity",
    "TrainReport",
    "__version__",
    "bspline2",
    "bspline3",
    "build_problem",
    "cost",
    "eval_phi",
    "eval_phi_prime",
    "finite_difference_gradient",
    "fista_lasso",
    "fit_soft_threshold",
    "generate_dataset",
    "genie_mmse",
    "gradient",
    "ista_forward",
    "lasso_objective",
    "load_dataset",
    "load_model",
    "max_relative_error",
    "project_coefficients",
    "save_dataset",
    "save_model",
    "snr_db",
    "soft_threshold",
    "soft_threshold_ista",
    "train",
    "tune_lasso_lambda",
]
