"""Numba-compiled grid-scan kernels (hot path of the prox solvers).

Same contracts as kernels_numpy; the argmin scan avoids materializing the
objective array, which matters for the dense 1e-5-step oracle scans.
"""

import math

import numpy as np
from numba import njit

_TANH_SAT = 20.0


@njit(cache=True)
def _obj(z_hat, la, beta, t):
    u = 0.5 * beta * t
    if u > _TANH_SAT:
        th = 1.0
    elif u < -_TANH_SAT:
        th = -1.0
    else:
        th = math.tanh(u)
    d = z_hat - t
    return 0.5 * d * d + la * t * th


@njit(cache=True)
def objective_grid(z_hat, lam, alpha, beta, lo, hi, n):
    """Values of 0.5*(z_hat-t)^2 + lam*alpha*t*tanh(beta*t/2) on a uniform grid.

    The grid is t_i = lo + i*(hi-lo)/(n-1) for i in [0, n).
    """
    step = (hi - lo) / (n - 1)
    la = lam * alpha
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = _obj(z_hat, la, beta, lo + step * i)
    return out


@njit(cache=True)
def objective_argmin(z_hat, lam, alpha, beta, lo, hi, n):
    """Index and value of the grid minimum of the objective (first on ties)."""
    step = (hi - lo) / (n - 1)
    la = lam * alpha
    best_i = 0
    best_v = _obj(z_hat, la, beta, lo)
    for i in range(1, n):
        v = _obj(z_hat, la, beta, lo + step * i)
        if v < best_v:
            best_v = v
            best_i = i
    return best_i, best_v
