"""Pure-numpy implementations of the grid-scan kernels.

Vectorized fallback used when numba is unavailable or disabled via the
FOOTHILL_DISABLE_NUMBA environment variable. Must stay call-compatible
with kernels_numba.
"""

import numpy as np

_TANH_SAT = 20.0


def objective_grid(z_hat, lam, alpha, beta, lo, hi, n):
    """Values of 0.5*(z_hat-t)^2 + lam*alpha*t*tanh(beta*t/2) on a uniform grid.

    The grid is t_i = lo + i*(hi-lo)/(n-1) for i in [0, n).
    """
    step = (hi - lo) / (n - 1)
    t = lo + step * np.arange(n)
    u = 0.5 * beta * t
    th = np.where(np.abs(u) > _TANH_SAT, np.sign(u), np.tanh(u))
    return 0.5 * (z_hat - t) ** 2 + (lam * alpha) * t * th


def objective_argmin(z_hat, lam, alpha, beta, lo, hi, n):
    """Index and value of the grid minimum of the objective (first on ties)."""
    obj = objective_grid(z_hat, lam, alpha, beta, lo, hi, n)
    i = int(np.argmin(obj))
    return i, float(obj[i])
