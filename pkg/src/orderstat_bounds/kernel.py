"""Order-statistic distribution kernel.

Evaluates the distribution function G_{k:n} of the k-th smallest of n iid
standard uniforms (a binomial tail sum, equivalently a regularized
incomplete beta function), its Beta(k, n+1-k) density, the regularized
incomplete beta function I_x(a, b) for real parameters, and elementary
symmetric polynomials of positive vectors.

Numerical strategy:

* integer parameters: direct binomial tail summation with log-gamma
  binomial coefficients, stable at both tails, used for n <= 1000;
* real parameters: continued fraction (modified Lentz) with the standard
  symmetry switch at x > (a+1)/(a+b+2), with a log-space variant for
  far-tail values that underflow double precision;
* elementary symmetric polynomials: incremental product expansion, which
  involves only additions of nonnegative terms, hence no cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import DomainError, NumericError

_BINOMIAL_TAIL_MAX_N = 1000
_CF_MAX_ITER = 300
_CF_REL_EPS = 1e-14
_CF_TINY = 1e-300


@dataclass(frozen=True)
class OrderStatParams:
    """Rank index k and sample size n, with the Beta normalizer cached."""

    k: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or not isinstance(self.n, int):
            raise DomainError("k and n must be integers")
        if self.n < 1 or not 1 <= self.k <= self.n:
            raise DomainError(
                f"rank index must satisfy 1 <= k <= n with n >= 1, got k={self.k}, n={self.n}"
            )

    @cached_property
    def log_beta(self) -> float:
        """log B(k, n+1-k)."""
        return (
            math.lgamma(self.k)
            + math.lgamma(self.n - self.k + 1)
            - math.lgamma(self.n + 1)
        )


def _log_binom(n: int, j: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)


def _binomial_range_sum(n: int, x: float, j_lo: int, j_hi: int) -> float:
    """Sum of C(n,j) x^j (1-x)^(n-j) over j in [j_lo, j_hi], in log space.

    All terms are nonnegative, so plain accumulation loses nothing.
    """
    if x == 0.0:
        return 1.0 if j_lo <= 0 else 0.0
    if x == 1.0:
        return 1.0 if j_hi >= n else 0.0
    lx = math.log(x)
    l1x = math.log1p(-x)
    total = 0.0
    for j in range(j_lo, j_hi + 1):
        total += math.exp(_log_binom(n, j) + j * lx + (n - j) * l1x)
    return min(total, 1.0)


def order_cdf(params: OrderStatParams, x: float) -> float:
    """P(U_{k:n} <= x), the chance that at least k of n uniforms fall below x."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if params.n <= _BINOMIAL_TAIL_MAX_N:
        return _binomial_range_sum(params.n, x, params.k, params.n)
    return regularized_incomplete_beta(params.k, params.n - params.k + 1, x)


def order_sf(params: OrderStatParams, x: float) -> float:
    """P(U_{k:n} > x) = P(Bin(n, x) <= k-1); the complementary tail of order_cdf."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if params.n <= _BINOMIAL_TAIL_MAX_N:
        return _binomial_range_sum(params.n, x, 0, params.k - 1)
    return 1.0 - regularized_incomplete_beta(params.k, params.n - params.k + 1, x)


def log_order_pdf(params: OrderStatParams, x: float) -> float:
    """log of the Beta(k, n+1-k) density; -inf at an endpoint where it vanishes."""
    k, n = params.k, params.n
    if x == 0.0:
        return math.log(n) if k == 1 else -math.inf
    if x == 1.0:
        return math.log(n) if k == n else -math.inf
    return -params.log_beta + (k - 1) * math.log(x) + (n - k) * math.log1p(-x)


def order_pdf(params: OrderStatParams, x: float) -> float:
    """Beta(k, n+1-k) density x^(k-1) (1-x)^(n-k) / B(k, n+1-k) on (0, 1)."""
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    return math.exp(log_order_pdf(params, x))


def _order_pdf01(params: OrderStatParams, x: float) -> float:
    """Density extended to [0, 1] by its one-sided limits (integrand use)."""
    return math.exp(log_order_pdf(params, x))


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function, modified Lentz.

    Valid (fast-converging) for x < (a+1)/(a+b+2); the caller applies the
    symmetry switch.
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
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
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
        if abs(delta - 1.0) < _CF_REL_EPS:
            return h
    raise NumericError(
        f"incomplete beta continued fraction did not converge for "
        f"a={a}, b={b}, x={x} within {_CF_MAX_ITER} iterations"
    )


def _log_ribeta_direct(a: float, b: float, x: float) -> float:
    """log I_x(a, b) via the continued fraction, assuming the direct branch."""
    log_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    return (
        a * math.log(x)
        + b * math.log1p(-x)
        - log_beta
        - math.log(a)
        + math.log(_beta_cf(a, b, x))
    )


def log_regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """log I_x(a, b); accurate even when I_x underflows double precision."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"beta parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return -math.inf
    if x == 1.0:
        return 0.0
    if x < (a + 1.0) / (a + b + 2.0):
        return _log_ribeta_direct(a, b, x)
    # Complement branch: I_x(a,b) = 1 - I_{1-x}(b,a), the complement is O(1).
    return math.log1p(-math.exp(_log_ribeta_direct(b, a, 1.0 - x)))


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for real a, b > 0 and x in [0, 1]."""
    return math.exp(log_regularized_incomplete_beta(a, b, x))


def elementary_symmetric(means: Sequence[float], m: int) -> float:
    """e_m(mu_1, ..., mu_n): sum of all m-fold products of distinct entries.

    Incremental product expansion, O(n * m); nonnegative inputs make every
    intermediate a sum of nonnegative terms, so small integer inputs come
    out exact.
    """
    n = len(means)
    if not 1 <= m <= n:
        raise DomainError(f"order m must satisfy 1 <= m <= len(means), got m={m}, n={n}")
    for mu in means:
        if not (mu > 0.0 and math.isfinite(mu)):
            raise DomainError(f"all entries must be positive and finite, got {mu}")
    coeffs = [1.0] + [0.0] * m
    filled = 0
    for mu in means:
        filled = min(filled + 1, m)
        for j in range(filled, 0, -1):
            coeffs[j] += mu * coeffs[j - 1]
    return coeffs[m]
