"""Student t CDF and percent point function, dependency-free.

The CDF is expressed through the regularized incomplete beta function
I_x(a, b), evaluated with a modified Lentz continued fraction; the ppf
inverts the CDF by bisection, which is guaranteed to converge because
the CDF is strictly increasing. Accuracy is driven by the round-trip
requirement |CDF(ppf(p, df)) - p| < 1e-6.
"""

from __future__ import annotations

from math import exp, lgamma, log, log1p

_CF_MAX_ITER = 400
_CF_EPS = 3e-16
_CF_TINY = 1e-300


def _beta_cont_frac(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz scheme).

    Converges fast for x < (a + 1) / (a + b + 2); the caller applies the
    symmetry I_x(a, b) = 1 - I_{1-x}(b, a) to stay in that region.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # Even step.
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # Odd step.
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction stalled (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("incomplete beta requires a > 0 and b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log1p(-x)
    front = exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cont_frac(a, b, x) / a
    return 1.0 - front * _beta_cont_frac(b, a, 1.0 - x) / b


def t_cdf(x: float, df: float) -> float:
    """P(T <= x) for T ~ Student t with df degrees of freedom."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if x == 0.0:
        return 0.5
    # Two-sided mass beyond |x| is I_u(df/2, 1/2) with u = df / (df + x^2).
    u = df / (df + x * x)
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, u)
    return 1.0 - tail if x > 0 else tail


def t_ppf(p: float, df: float) -> float:
    """Inverse of t_cdf: the x with CDF(x; df) = p.

    Root-finding by bisection on the monotone CDF, starting from the
    [-50, 50] bracket and widening geometrically for quantiles outside it
    (low df at extreme p). The bracket is narrowed below 1e-10, well past
    the 1e-6 CDF round-trip requirement.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie strictly inside (0, 1), got {p}")
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if p == 0.5:
        return 0.0

    lo, hi = -50.0, 50.0
    while t_cdf(lo, df) > p:
        lo *= 2.0
    while t_cdf(hi, df) < p:
        hi *= 2.0
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if t_cdf(mid, df) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-10 * max(1.0, abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)
