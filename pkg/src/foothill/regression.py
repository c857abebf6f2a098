"""Penalized least squares with the foothill penalty.

Objective: (1/2n) ||y - X theta||^2 + lam * sum_j p(theta_j). The penalty
is smooth, so the fit is plain full-gradient descent with Armijo
backtracking, started from the least-squares solution.
"""

from dataclasses import dataclass

import numpy as np

from .penalty import PenaltyParams, grad as penalty_grad, value as penalty_value


class NumericalError(RuntimeError):
    """Objective became non-finite during iteration; carries the trace so far."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass
class RegressionProblem:
    X: np.ndarray
    y: np.ndarray
    lam: float
    params: PenaltyParams

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.X.ndim != 2 or self.X.shape[0] < 1 or self.X.shape[1] < 1:
            raise ValueError(f"X must be a nonempty 2-D matrix, got shape {self.X.shape}")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("X contains non-finite entries")
        if self.y.ndim != 1 or self.y.shape[0] != self.X.shape[0]:
            raise ValueError(
                f"y must be a vector of length {self.X.shape[0]}, got shape {self.y.shape}"
            )
        if not np.all(np.isfinite(self.y)):
            raise ValueError("y contains non-finite entries")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise ValueError(f"lam must be a nonnegative finite real, got {self.lam!r}")


@dataclass
class FitResult:
    theta: np.ndarray
    objective_trace: list
    converged: bool
    iterations: int


@dataclass
class ConsistencyReport:
    sample_sizes: list
    scaled_errors: list
    replicates: int
    seed: int


def objective(problem: RegressionProblem, theta):
    r = problem.y - problem.X @ theta
    n = problem.X.shape[0]
    return 0.5 * (r @ r) / n + problem.lam * float(np.sum(penalty_value(problem.params, theta)))


def gradient(problem: RegressionProblem, theta):
    r = problem.y - problem.X @ theta
    n = problem.X.shape[0]
    return -(problem.X.T @ r) / n + problem.lam * penalty_grad(problem.params, theta)


def ols(X, y):
    """Least-squares coefficients via SVD; raises LinAlgError if X is rank-deficient."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    theta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise np.linalg.LinAlgError(
            f"X is rank-deficient (rank {rank} < {X.shape[1]} columns)"
        )
    return theta


def fit(problem: RegressionProblem, max_iter: int = 100_000, tol: float = 1e-8) -> FitResult:
    """Gradient descent with Armijo backtracking (halving, c1 = 1e-4).

    The initial step is 1/L with L = lambda_max(X^T X / n) + lam*alpha*beta,
    the data curvature plus the penalty's curvature bound at the origin.
    Starts from the least-squares solution and stops when the gradient norm
    falls below `tol`.
    """
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter!r}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")

    X, n = problem.X, problem.X.shape[0]
    theta = np.linalg.lstsq(X, problem.y, rcond=None)[0]
    lip = float(np.linalg.eigvalsh(X.T @ X)[-1]) / n \
        + problem.lam * problem.params.alpha * problem.params.beta
    step0 = 1.0 / lip

    f_cur = objective(problem, theta)
    trace = [f_cur]
    converged = False
    plateau = 0
    gn2_best = np.inf
    for _ in range(max_iter):
        g = gradient(problem, theta)
        gn2 = float(g @ g)
        if np.sqrt(gn2) <= tol:
            converged = True
            break
        s = step0
        stalled = False
        while True:
            theta_new = theta - s * g
            f_new = objective(problem, theta_new)
            if not np.isfinite(f_new):
                raise NumericalError(
                    f"objective became non-finite at iteration {len(trace)}", trace
                )
            if f_new <= f_cur - 1e-4 * s * gn2:
                break
            s *= 0.5
            if s < 1e-18 * step0:
                # line search exhausted at rounding level
                stalled = True
                break
        if stalled:
            break
        # once neither the objective (below machine precision) nor the
        # gradient norm improves for twenty straight iterations, the iterate
        # is pinned at the floating-point floor and there is nothing to gain
        if f_cur - f_new <= 4e-16 * max(1.0, abs(f_cur)) and gn2 >= 0.98 * gn2_best:
            plateau += 1
        else:
            plateau = 0
        gn2_best = min(gn2_best, gn2)
        theta, f_cur = theta_new, f_new
        trace.append(f_cur)
        if plateau >= 20:
            break
    return FitResult(theta, trace, converged, len(trace) - 1)


def consistency_experiment(true_theta, n_list, replicates, lam, params,
                           noise_sd, seed) -> ConsistencyReport:
    """Mean of sqrt(n)*||theta_hat - theta|| over seeded replicates, per sample size.

    Designs are i.i.d. standard normal; responses are X theta + noise. `lam`
    weights the penalty against the *half sum of squares*; the fit objective
    divides the squared loss by n, so the equivalent weight passed to `fit`
    is lam/n. Each replicate owns the RNG stream (seed, replicate); results
    merge in replicate order, so the report is deterministic given `seed`.
    """
    true_theta = np.asarray(true_theta, dtype=np.float64)
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError(f"n_list must be strictly increasing, got {n_list}")
    if replicates < 10:
        raise ValueError(f"replicates must be >= 10, got {replicates!r}")
    if not (np.isfinite(noise_sd) and noise_sd >= 0):
        raise ValueError(f"noise_sd must be a nonnegative real, got {noise_sd!r}")
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")

    p = true_theta.shape[0]
    errs = np.empty((replicates, len(n_list)))
    for rep in range(replicates):
        rng = np.random.default_rng([seed, rep])
        for j, n in enumerate(n_list):
            X = rng.standard_normal((n, p))
            y = X @ true_theta + noise_sd * rng.standard_normal(n)
            problem = RegressionProblem(X=X, y=y, lam=lam / n, params=params)
            result = fit(problem)
            errs[rep, j] = np.sqrt(n) * float(np.linalg.norm(result.theta - true_theta))
    return ConsistencyReport(
        sample_sizes=n_list,
        scaled_errors=[float(e) for e in errs.mean(axis=0)],
        replicates=replicates,
        seed=int(seed),
    )
