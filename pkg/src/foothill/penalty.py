"""Foothill penalty: value, calculus, saddle points, and named limiting cases.

The penalty is p(x) = alpha * x * tanh(beta*x/2) with shape alpha > 0 and
scale beta > 0. It is smooth, symmetric, nonnegative and quasiconvex; for
alpha = 1 and large beta it tracks |x|, and for beta = 2/alpha and large
alpha it tracks x^2 on a bounded interval.
"""

from dataclasses import dataclass

import numpy as np

# Beyond |beta*x/2| > TANH_SAT, tanh is replaced by sign and sech^2 by 0;
# the true values differ from these by < 1e-17 there, and this keeps the
# large-argument branch exact (p(x) = alpha*|x|) with no overflow in exp.
TANH_SAT = 20.0


@dataclass(frozen=True)
class PenaltyParams:
    """Shape/scale pair (alpha, beta), both strictly positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (np.isfinite(a) and a > 0):
            raise ValueError(f"alpha must be a positive finite real, got {a!r}")
        if not (np.isfinite(b) and b > 0):
            raise ValueError(f"beta must be a positive finite real, got {b!r}")


@dataclass(frozen=True)
class SaddleInfo:
    """Positive saddle abscissa x0 and the penalty value there (= 2*alpha/beta)."""

    x0: float
    value: float


def _check_finite(x):
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    return x


def _tanh_half(beta, x):
    # tanh(beta*x/2) with exact sign saturation for large arguments
    u = 0.5 * beta * x
    return np.where(np.abs(u) > TANH_SAT, np.sign(u), np.tanh(u))


def _sech2_half(beta, x):
    # sech^2(beta*x/2), evaluated via exp(-|u|) so cosh never overflows
    u = np.abs(0.5 * beta * x)
    e = np.exp(-u)
    sech = 2.0 * e / (1.0 + e * e)
    return np.where(u > TANH_SAT, 0.0, sech * sech)


def value(params: PenaltyParams, x):
    """Evaluate the penalty alpha * x * tanh(beta*x/2).

    Accepts a scalar or array; returns the same shape. Nonnegative and
    even in x. Raises ValueError on non-finite input.
    """
    x = _check_finite(x)
    out = params.alpha * x * _tanh_half(params.beta, x)
    return out if out.ndim else float(out)


def grad(params: PenaltyParams, x):
    """First derivative: alpha*tanh(beta*x/2) + (alpha*beta*x/2)*sech^2(beta*x/2).

    Odd in x; strictly positive for x > 0 (the penalty is quasiconvex).
    """
    x = _check_finite(x)
    a, b = params.alpha, params.beta
    out = a * _tanh_half(b, x) + 0.5 * a * b * x * _sech2_half(b, x)
    return out if out.ndim else float(out)


def hess(params: PenaltyParams, x):
    """Second derivative: (alpha*beta/2)*sech^2(beta*x/2)*(2 - beta*x*tanh(beta*x/2)).

    Even in x; positive inside (-x0, x0) and negative beyond the saddle
    abscissa x0 returned by :func:`saddle`.
    """
    x = _check_finite(x)
    a, b = params.alpha, params.beta
    t = _tanh_half(b, x)
    s2 = _sech2_half(b, x)
    out = 0.5 * a * b * s2 * (2.0 - b * x * t)
    return out if out.ndim else float(out)


def saddle(params: PenaltyParams) -> SaddleInfo:
    """Positive inflection point of the penalty.

    Solves 2 - beta*x*tanh(beta*x/2) = 0 on [1/beta, 10/beta] with a
    Newton iteration safeguarded by bisection; the residual is driven
    below 1e-13. The penalty value there is 2*alpha/beta exactly.
    """
    b = params.beta

    def f_df(x):
        t = float(_tanh_half(b, x))
        s2 = float(_sech2_half(b, x))
        f = 2.0 - b * x * t
        df = -b * (t + 0.5 * b * x * s2)
        return f, df

    x0 = _newton_bisect(f_df, 1.0 / b, 10.0 / b, ftol=1e-13)
    return SaddleInfo(x0=x0, value=2.0 * params.alpha / params.beta)


def _newton_bisect(f_df, lo, hi, ftol=1e-13, max_iter=200):
    """Root of f on a sign-changing bracket [lo, hi]; Newton with bisection fallback."""
    flo, _ = f_df(lo)
    fhi, _ = f_df(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError("root is not bracketed")
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f, df = f_df(x)
        if abs(f) < ftol:
            return x
        # keep the bracket: f(lo) and f(x) share sign => root is in [x, hi]
        if f * flo > 0:
            lo, flo = x, f
        else:
            hi, fhi = x, f
        step_ok = df != 0.0
        if step_ok:
            x_new = x - f / df
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            return x
        x = x_new
    return x


def taylor_eval(params: PenaltyParams, x, order: int):
    """Even-power expansion of the penalty about 0, truncated at `order`.

    Terms: (alpha*beta/2) x^2 - (alpha*beta^3/24) x^4 + (alpha*beta^5/240) x^6.
    `order` must be 2, 4 or 6.
    """
    if order not in (2, 4, 6):
        raise ValueError(f"order must be one of 2, 4, 6; got {order!r}")
    x = _check_finite(x)
    a, b = params.alpha, params.beta
    x2 = x * x
    out = 0.5 * a * b * x2
    if order >= 4:
        out = out - (a * b**3 / 24.0) * x2 * x2
    if order >= 6:
        out = out + (a * b**5 / 240.0) * x2 * x2 * x2
    return out if out.ndim else float(out)


def ridge_gap(params: PenaltyParams, c: float) -> float:
    """Integral of (x^2 - p(x))^2 over [0, c] in the Ridge-matched regime.

    Requires beta = 2/alpha (within 1e-12); the result is close to
    c^9/(81*alpha^4) for large alpha. Adaptive Simpson quadrature with
    absolute tolerance 1e-12.
    """
    if abs(params.beta - 2.0 / params.alpha) > 1e-12:
        raise ValueError(
            f"ridge_gap requires beta = 2/alpha; got beta={params.beta!r}, "
            f"2/alpha={2.0 / params.alpha!r}"
        )
    if not (np.isfinite(c) and c > 0):
        raise ValueError(f"c must be a positive finite real, got {c!r}")

    def integrand(x):
        return (x * x - value(params, x)) ** 2

    return _adaptive_simpson(integrand, 0.0, float(c), tol=1e-12)


def _adaptive_simpson(f, a, b, tol, max_depth=40):
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    return _simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + \
        _simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)


# Finite stand-ins for the limiting parameterizations: beta = 1e4 plays the
# role of beta -> inf (lasso), alpha = 1e3 of alpha -> inf (Ridge).
_NAMED_CASES = {
    "lasso_limit": (1.0, 1e4),
    "ridge_limit": (1e3, 2.0 / 1e3),
    "huber_like": (16.0, 2.0 / 16.0),
    "canonical": (1.0, 2.0),
}


def named_case(name: str) -> PenaltyParams:
    """Parameter pairs for the named limiting/reference cases.

    lasso_limit -> (1, 1e4): p(x) ~ |x|
    ridge_limit -> (1e3, 2e-3): p(x) ~ x^2 on a bounded interval
    huber_like  -> (16, 0.125): p(x) = 16 x tanh(x/16), quadratic core, linear tails
    canonical   -> (1, 2): p(x) = x tanh(x)
    """
    try:
        a, b = _NAMED_CASES[name]
    except KeyError:
        raise ValueError(
            f"unknown case {name!r}; expected one of {sorted(_NAMED_CASES)}"
        ) from None
    return PenaltyParams(alpha=a, beta=b)
