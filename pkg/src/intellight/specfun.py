"""Jacobi and Lagrange polynomials for arbitrary real parameters.

Everything is built on the explicit finite sum

    P_n^(a,b)(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)

where ``C`` is the generalized binomial coefficient. The sum is defined for
every real ``a``, ``b`` and ``x`` (negative integers included), so it is the
single definition used throughout the package.

Terms are carried as ``(sign, log|term|)`` pairs built from cumulative log
sums, which keeps degrees in the thousands free of overflow. The final
reduction goes through :func:`math.fsum`. Accuracy is only limited by
cancellation between terms of opposite sign; every evaluation the
interferometry modules make has terms of a single sign.
"""
import math

import numpy as np

__all__ = [
    "binom_gen",
    "log_binom_table",
    "jacobi_p",
    "log_jacobi_p",
    "jacobi_ratio",
    "lagrange_g",
]


def binom_gen(a, k):
    """Generalized binomial coefficient a(a-1)...(a-k+1)/k!.

    >>> binom_gen(-1, 2)
    1.0
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    out = 1.0
    for i in range(int(k)):
        out *= (a - i) / (i + 1)
    return out


def log_binom_table(a, kmax):
    """Return ``(sign, logabs)`` arrays of C(a, k) for k = 0..kmax.

    Zero coefficients get sign 0 and logabs ``-inf``. Once a factor
    ``a - i`` vanishes every later coefficient vanishes as well.
    """
    kmax = int(kmax)
    sign = np.ones(kmax + 1)
    logabs = np.zeros(kmax + 1)
    if kmax == 0:
        return sign, logabs
    factors = a - np.arange(kmax, dtype=float)
    dead = np.cumsum(factors == 0) > 0
    with np.errstate(divide="ignore"):
        logf = np.log(np.abs(factors))
    logf[factors == 0] = 0.0
    logabs[1:] = np.cumsum(logf) - np.cumsum(np.log(np.arange(1, kmax + 1)))
    sign[1:] = np.cumprod(np.sign(factors) + (factors == 0))
    sign[1:][dead] = 0.0
    logabs[1:][dead] = -np.inf
    return sign, logabs


def _log_power(base, n):
    # sign and log|base^s| for s = 0..n, with 0^0 = 1
    s = np.arange(n + 1)
    if base == 0:
        sign = (s == 0).astype(float)
        logabs = np.where(s == 0, 0.0, -np.inf)
        return sign, logabs
    sign = np.where((base < 0) & (s % 2 == 1), -1.0, 1.0)
    return sign, s * math.log(abs(base))


def _jacobi_terms(n, a, b, x):
    n = int(n)
    sa, la = log_binom_table(n + a, n)      # C(n+a, k), k = n - s
    sb, lb = log_binom_table(n + b, n)      # C(n+b, s)
    su, lu = _log_power((x - 1) / 2, n)     # ((x-1)/2)^s
    sv, lv = _log_power((x + 1) / 2, n)     # ((x+1)/2)^(n-s)
    sign = sa[::-1] * sb * su * sv[::-1]
    with np.errstate(invalid="ignore"):
        logabs = la[::-1] + lb + lu + lv[::-1]
    logabs[sign == 0] = -np.inf
    return sign, logabs


# k! is exact in double precision up to 18!
_DIRECT_MAX_DEGREE = 18


def _binom_row(a, n):
    # C(a, k) for k = 0..n as numerator/denominator products, exact for
    # integer a when the products stay below 2**53
    out = np.ones(n + 1)
    num, den = 1.0, 1.0
    for k in range(1, n + 1):
        num *= a - (k - 1)
        den *= k
        out[k] = num / den
    return out


def _jacobi_direct(n, a, b, x):
    ca = _binom_row(n + a, n)
    cb = _binom_row(n + b, n)
    u, v = (x - 1) / 2, (x + 1) / 2
    terms = [ca[n - s] * cb[s] * u ** s * v ** (n - s) for s in range(n + 1)]
    return math.fsum(terms)


def log_jacobi_p(n, a, b, x):
    """Return ``(sign, log|P_n^(a,b)(x)|)``; sign is 0 for a zero value."""
    if n < 0 or int(n) != n:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    n = int(n)
    if n <= _DIRECT_MAX_DEGREE and max(abs(a), abs(b), abs(x)) < 64:
        value = _jacobi_direct(n, a, b, x)
        if value == 0.0:
            return 0.0, -math.inf
        return math.copysign(1.0, value), math.log(abs(value))
    sign, logabs = _jacobi_terms(n, a, b, x)
    live = sign != 0
    if not live.any():
        return 0.0, -math.inf
    top = logabs[live].max()
    total = math.fsum((sign[live] * np.exp(logabs[live] - top)).tolist())
    if total == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, total), top + math.log(abs(total))


def jacobi_p(n, a, b, x):
    """Jacobi polynomial P_n^(a,b)(x) for real (possibly negative) a, b.

    The result overflows to ``inf`` only when the value itself is out of
    float range; use :func:`log_jacobi_p` or :func:`jacobi_ratio` there.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    if n <= _DIRECT_MAX_DEGREE and max(abs(a), abs(b), abs(x)) < 64:
        return _jacobi_direct(int(n), a, b, x)
    sign, logabs = log_jacobi_p(n, a, b, x)
    if sign == 0:
        return 0.0
    return sign * math.exp(logabs) if logabs < 709.78 else sign * math.inf


def jacobi_ratio(n_num, a_num, b_num, n_den, a_den, b_den, x):
    """P_{n_num}^(a_num,b_num)(x) / P_{n_den}^(a_den,b_den)(x).

    A negative numerator degree counts as the zero polynomial. Raises
    ZeroDivisionError when the denominator vanishes.
    """
    sd, ld = log_jacobi_p(n_den, a_den, b_den, x)
    if sd == 0:
        raise ZeroDivisionError("denominator polynomial vanishes")
    if n_num < 0:
        return 0.0
    sn, ln = log_jacobi_p(n_num, a_num, b_num, x)
    if sn == 0:
        return 0.0
    return sn * sd * math.exp(ln - ld)


def lagrange_g(n, a, b, u, v):
    """Lagrange polynomial g_n^(a,b)(u, v) via its Jacobi representation.

    These are the Taylor coefficients of (1 - u z)^(-a) (1 - v z)^(-b).
    """
    if u == v:
        raise ValueError("lagrange_g requires u != v")
    p = jacobi_p(n, -a - n, -b - n, (u + v) / (u - v))
    return (v - u) ** n * p
