"""Univariate penalized problem 0.5*(z_hat - theta)^2 + lam * p(theta).

The objective is a convex quadratic plus a quasiconvex penalty and can
have two local minima, so the solver scans a coarse grid, refines every
local basin, and compares the refined candidates; `prox_oracle` is the
independent dense-grid ground truth used to validate it.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .penalty import TANH_SAT, PenaltyParams, value

COARSE_POINTS = 10_000
ORACLE_STEP = 1e-5
# candidates whose objectives agree within this are tied; the smallest
# |theta| wins so paths are deterministic and lean sparse
TIE_TOL = 1e-12

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class ProxQuery:
    """One instance of the univariate problem: OLS estimate, weight, penalty."""

    z_hat: float
    lam: float
    params: PenaltyParams

    def __post_init__(self):
        if not np.isfinite(self.z_hat):
            raise ValueError(f"z_hat must be finite, got {self.z_hat!r}")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise ValueError(f"lam must be a nonnegative finite real, got {self.lam!r}")


@dataclass
class SolutionPath:
    """Minimizers theta(z) over a grid of OLS estimates, for fixed lam and params."""

    z_grid: np.ndarray
    theta_values: np.ndarray
    lam: float
    params: PenaltyParams = field(repr=False)


def prox_objective(q: ProxQuery, theta):
    """Objective 0.5*(z_hat - theta)^2 + lam * p(theta); scalar or array theta."""
    return 0.5 * (q.z_hat - np.asarray(theta, dtype=np.float64)) ** 2 \
        + q.lam * value(q.params, theta)


def _scalar_objective(q: ProxQuery):
    z, la, beta = q.z_hat, q.lam * q.params.alpha, q.params.beta

    def f(t):
        u = 0.5 * beta * t
        if u > TANH_SAT:
            th = 1.0
        elif u < -TANH_SAT:
            th = -1.0
        else:
            th = math.tanh(u)
        return 0.5 * (z - t) ** 2 + la * t * th

    return f


def _scalar_derivatives(q: ProxQuery):
    """First and second derivative of the objective, in closed form."""
    z, beta = q.z_hat, q.params.beta
    la = q.lam * q.params.alpha

    def d1_d2(t):
        u = 0.5 * beta * t
        if abs(u) > TANH_SAT:
            th = math.copysign(1.0, u)
            s2 = 0.0
        else:
            th = math.tanh(u)
            s2 = 1.0 - th * th
        d1 = (t - z) + la * (th + u * s2)
        d2 = 1.0 + la * beta * s2 * (1.0 - u * th)
        return d1, d2

    return d1_d2


def _newton_polish(d1_d2, t, max_steps=4, trust=1e-6):
    """Drive the objective derivative to machine zero near a golden-section point.

    Steps are rejected (and iteration stops) if curvature is not positive
    or the step leaves the `trust` neighborhood, so the point can only
    slide to the bottom of its own basin.
    """
    for _ in range(max_steps):
        d1, d2 = d1_d2(t)
        if d2 <= 0.0:
            break
        step = d1 / d2
        if not abs(step) < trust:
            break
        t -= step
        if abs(step) < 1e-14 * max(1.0, abs(t)):
            break
    return t


def _golden_min(f, a, b, xtol=1e-9):
    """Golden-section minimum of unimodal f on [a, b], to bracket width xtol."""
    h = b - a
    if h <= xtol:
        return 0.5 * (a + b)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    yc, yd = f(c), f(d)
    while h > xtol:
        if yc < yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + _INVPHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + _INVPHI * h
            yd = f(d)
    return 0.5 * (a + b)


def _local_min_indices(obj):
    """Grid indices of local minima, one representative per flat run."""
    interior = (obj[1:-1] <= obj[:-2]) & (obj[1:-1] <= obj[2:])
    idx = np.flatnonzero(interior) + 1
    ends = []
    if obj[0] <= obj[1]:
        ends.append(0)
    if obj[-1] <= obj[-2]:
        ends.append(len(obj) - 1)
    idx = np.union1d(idx, np.array(ends, dtype=int))
    if idx.size == 0:
        return [int(np.argmin(obj))]
    groups = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
    reps = [int(g[len(g) // 2]) for g in groups]
    # defensive cap; the objective has at most two genuine basins
    if len(reps) > 8:
        reps = sorted(reps, key=lambda i: obj[i])[:8]
    return reps


def prox_solve(q: ProxQuery) -> float:
    """Global minimizer of the objective, to about 1e-8 in theta.

    Coarse scan of COARSE_POINTS over [min(0, z_hat)-1, max(0, z_hat)+1],
    golden-section refinement of each sampled basin, then comparison of
    the refined candidates (plus theta=0). Objective ties within TIE_TOL
    resolve to the smaller |theta|.
    """
    if q.lam == 0.0:
        return q.z_hat
    z = q.z_hat
    lo = min(0.0, z) - 1.0
    hi = max(0.0, z) + 1.0
    obj = backend.objective_grid(z, q.lam, q.params.alpha, q.params.beta,
                                 lo, hi, COARSE_POINTS)
    f = _scalar_objective(q)
    d1_d2 = _scalar_derivatives(q)
    step = (hi - lo) / (COARSE_POINTS - 1)
    candidates = [(0.0, f(0.0))]
    for i in _local_min_indices(obj):
        a = lo + step * max(i - 1, 0)
        b = lo + step * min(i + 1, COARSE_POINTS - 1)
        t = _newton_polish(d1_d2, _golden_min(f, a, b))
        candidates.append((t, f(t)))
    best_val = min(fv for _, fv in candidates)
    tied = [t for t, fv in candidates if fv <= best_val + TIE_TOL]
    return min(tied, key=abs)


def prox_oracle(q: ProxQuery) -> float:
    """Exhaustive-scan ground truth: step-1e-5 grid over [-|z|-1, |z|+1].

    No refinement; accurate to the grid step. Kept independent of
    prox_solve so the two can check each other.
    """
    hi = abs(q.z_hat) + 1.0
    lo = -hi
    n = int(round((hi - lo) / ORACLE_STEP)) + 1
    idx, _ = backend.objective_argmin(q.z_hat, q.lam, q.params.alpha,
                                      q.params.beta, lo, hi, n)
    return lo + idx * (hi - lo) / (n - 1)


def solution_path(lam: float, params: PenaltyParams, z_min: float, z_max: float,
                  n_points: int) -> SolutionPath:
    """prox_solve evaluated over a uniform grid of OLS estimates."""
    if not z_min < z_max:
        raise ValueError(f"need z_min < z_max, got [{z_min!r}, {z_max!r}]")
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points!r}")
    z_grid = np.linspace(z_min, z_max, n_points)
    theta = np.array([prox_solve(ProxQuery(float(z), lam, params)) for z in z_grid])
    return SolutionPath(z_grid=z_grid, theta_values=theta, lam=lam, params=params)
