"""Foothill penalty toolkit.

Smooth quasiconvex penalty alpha*x*tanh(beta*x/2) with exact calculus,
its proximal solutions and paths, penalized linear regression, and a
shifted variant that drives binary quantization of small dense networks.
"""

from .backend import backend_name
from .penalty import (
    PenaltyParams,
    SaddleInfo,
    grad,
    hess,
    named_case,
    ridge_gap,
    saddle,
    taylor_eval,
    value,
)
from .prox import ProxQuery, SolutionPath, prox_objective, prox_oracle, prox_solve, solution_path
from .regression import (
    ConsistencyReport,
    FitResult,
    NumericalError,
    RegressionProblem,
    consistency_experiment,
    fit,
    ols,
)
from .quantizer import (
    QuantNet,
    QuantReport,
    ShiftedPenalty,
    TrainConfig,
    accuracy,
    binarize_snapshot,
    lambda_schedule,
    predict,
    shifted_eval,
    shifted_grad,
    train,
    two_gaussians,
)

__version__ = "0.1.0"
