"""Sharp upper bounds for E(X_{k:n})^alpha given nonnegative samples with
fixed mean(s).

For iid samples with mean mu the supremum of E(X_{k:n})^alpha over all
nonnegative laws splits into regimes in the moment order alpha:

* ``sub_unit`` (0 < alpha < 1, 2 <= k <= n): A * mu^alpha where A comes
  from the greatest convex minorant of G_{k:n}, via a Hoelder argument on
  the quantile representation. Attained by an absolutely continuous law
  whose quantile function is a normalized power of the minorant slope.
* ``mid`` (1 <= alpha < n+1-k, 2 <= k <= n-1): A * mu^alpha with
  A = (1 - G_{k:n}(rho)) / (1-rho)^alpha and rho the unique root of
  alpha (1 - G_{k:n}(rho)) = (1-rho) g_{k:n}(rho). Attained by the
  zero-inflated two-point law with P(X=0) = rho.
* ``boundary_power`` (alpha = n+1-k): C(n, k-1) * mu^(n+1-k), and for
  merely independent samples the elementary symmetric polynomial
  e_{n+1-k}(mu_1, ..., mu_n). Best possible; attained only for k = 1,
  approached for k >= 2 by two-point laws with a growing atom.
* ``minimum_iid`` / ``minimum_indep`` (k = 1): products of the smallest
  means times a fractional power, attained by explicit configurations.
* ``unbounded`` (alpha > n+1-k): no finite bound exists; a heavy-tailed
  witness with the requested mean has an infinite moment of that order.

The dispatcher reports unbounded regimes with an infinite sentinel, never
an exception, so sweeps and tables can include them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import DomainError, UnsupportedRegimeError
from .kernel import (
    OrderStatParams,
    elementary_symmetric,
    log_order_pdf,
    log_regularized_incomplete_beta,
    order_pdf,
    order_sf,
)
from .numerics import bisect_root, logaddexp

# Moment orders within this distance of a regime boundary are evaluated by
# the boundary formula itself; the exponents 1/(1-alpha) and the root
# bracket degenerate there while the bounds are continuous across.
ALPHA_BOUNDARY_SNAP = 1e-6

_ROOT_BRACKET_LO = 1e-15
_ROOT_ITERATIONS = 200


class SampleModel(str, Enum):
    IID = "iid"
    INDEPENDENT = "independent"


class Regime(str, Enum):
    SUB_UNIT = "sub_unit"
    MID = "mid"
    BOUNDARY_POWER = "boundary_power"
    MINIMUM_IID = "minimum_iid"
    MINIMUM_INDEP = "minimum_indep"
    UNBOUNDED = "unbounded"


class Attainability(str, Enum):
    ATTAINED = "attained"
    BEST_POSSIBLE_NOT_ATTAINED = "best_possible_not_attained"
    ATTAINED_BY_DEGENERATE = "attained_by_degenerate"


@dataclass(frozen=True)
class MomentQuery:
    """A moment-bound problem instance.

    model=iid takes a single mean; model=independent takes one mean per
    component.
    """

    model: SampleModel
    n: int
    k: int
    alpha: float
    means: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", SampleModel(self.model))
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        if not isinstance(self.n, int) or not isinstance(self.k, int):
            raise DomainError("n and k must be integers")
        if self.n < 1 or not 1 <= self.k <= self.n:
            raise DomainError(
                f"rank must satisfy 1 <= k <= n with n >= 1, got k={self.k}, n={self.n}"
            )
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")
        for m in self.means:
            if not (m > 0.0 and math.isfinite(m)):
                raise DomainError(f"means must be strictly positive and finite, got {m}")
        if self.model is SampleModel.IID and len(self.means) != 1:
            raise DomainError("model=iid requires exactly one mean")
        if self.model is SampleModel.INDEPENDENT and len(self.means) != self.n:
            raise DomainError(
                f"model=independent requires exactly n={self.n} means, got {len(self.means)}"
            )

    @property
    def mean(self) -> float:
        return self.means[0]


@dataclass(frozen=True)
class BoundReport:
    """The computed bound plus everything needed to reproduce and verify it.

    bound is math.inf in the unbounded regime. constant_A is the multiplier
    of mu^alpha in iid regimes; rho the interior root when one exists.
    boundary_snapped flags queries whose alpha was within
    ALPHA_BOUNDARY_SNAP of a regime boundary and was evaluated by the
    boundary formula. mean_order records the ascending sort applied to the
    mean vector in the independent-minimum regime.
    """

    bound: float
    regime: Regime
    attainability: Attainability
    constant_A: Optional[float] = None
    rho: Optional[float] = None
    extremal: object = None
    boundary_snapped: bool = False
    mean_order: Optional[tuple[int, ...]] = None

    @property
    def is_unbounded(self) -> bool:
        return math.isinf(self.bound)


def _require_mid_regime(k: int, n: int, alpha: float) -> None:
    if n < 3 or not 2 <= k <= n - 1:
        raise DomainError(
            f"interior-rank regime requires n >= 3 and 2 <= k <= n-1, got k={k}, n={n}"
        )
    if not 1.0 <= alpha < n + 1 - k:
        raise DomainError(
            f"moment order must satisfy 1 <= alpha < n+1-k = {n + 1 - k}, got {alpha}"
        )


def solve_rho(k: int, n: int, alpha: float) -> float:
    """Unique root of alpha (1 - G_{k:n}(x)) = (1-x) g_{k:n}(x) in (0, 1).

    The difference t(x) starts at alpha > 0, dips to a negative global
    minimum at (k-1)/(n-alpha) and returns to 0 at x = 1, so the root lies
    in (0, (k-1)/(n-alpha)) and plain bisection on that bracket converges
    unconditionally.
    """
    _require_mid_regime(k, n, alpha)
    params = OrderStatParams(k, n)

    def t(x: float) -> float:
        return alpha * order_sf(params, x) - (1.0 - x) * order_pdf(params, x)

    hi = (k - 1) / (n - alpha)
    return bisect_root(t, _ROOT_BRACKET_LO, hi, iterations=_ROOT_ITERATIONS)


def solve_rho_gcm(k: int, n: int) -> Optional[float]:
    """Root of 1 - G_{k:n}(rho) = (1-rho) g_{k:n}(rho), the last tangency
    point of the greatest convex minorant of G_{k:n}.

    Returns None for k = n, where G_{n:n}(u) = u^n is already convex and no
    root is needed.
    """
    if not 2 <= k <= n:
        raise DomainError(f"greatest convex minorant root requires 2 <= k <= n, got k={k}, n={n}")
    if k == n:
        return None
    return solve_rho(k, n, 1.0)


def constant_A_mid(k: int, n: int, alpha: float) -> float:
    """Bound multiplier (1 - G_{k:n}(rho)) / (1-rho)^alpha for 1 <= alpha < n+1-k."""
    _require_mid_regime(k, n, alpha)
    rho = solve_rho(k, n, alpha)
    params = OrderStatParams(k, n)
    return order_sf(params, rho) / (1.0 - rho) ** alpha


def constant_A_mid_density_form(k: int, n: int, alpha: float) -> float:
    """Equivalent multiplier g_{k:n}(rho) / (alpha (1-rho)^(alpha-1)).

    Identical to constant_A_mid by the definition of rho; kept as an
    internal consistency cross-check.
    """
    _require_mid_regime(k, n, alpha)
    rho = solve_rho(k, n, alpha)
    params = OrderStatParams(k, n)
    return order_pdf(params, rho) / (alpha * (1.0 - rho) ** (alpha - 1.0))


def _log_gcm_power_integral(k: int, n: int, alpha: float, rho: float) -> float:
    """log of int_0^1 gbar(u)^(1/(1-alpha)) du for 2 <= k <= n-1.

    gbar equals g_{k:n} below rho and is flat at g_{k:n}(rho) above it, so
    the integral splits into a real-parameter incomplete beta piece and a
    flat piece; both are assembled in log space since g^q overflows for
    alpha near 1.
    """
    params = OrderStatParams(k, n)
    q = 1.0 / (1.0 - alpha)
    a2 = q * (k - 1) + 1.0
    b2 = q * (n - k) + 1.0
    log_beta2 = math.lgamma(a2) + math.lgamma(b2) - math.lgamma(a2 + b2)
    curved = -q * params.log_beta + log_beta2 + log_regularized_incomplete_beta(a2, b2, rho)
    flat = math.log1p(-rho) + q * log_order_pdf(params, rho)
    return logaddexp(curved, flat)


def constant_A_low(k: int, n: int, alpha: float) -> float:
    """Bound multiplier for 0 < alpha < 1 and 2 <= k <= n.

    For k = n the minorant slope is n u^(n-1) and the closed form
    n ((1-alpha)/(n-alpha))^(1-alpha) is exact. For k < n the value is
    (int_0^1 gbar^(1/(1-alpha)))^(1-alpha); alpha within
    ALPHA_BOUNDARY_SNAP of 1 is evaluated by the limit g_{k:n}(rho).
    """
    if not 2 <= k <= n:
        raise DomainError(f"sub-unit regime requires 2 <= k <= n, got k={k}, n={n}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"sub-unit regime requires 0 < alpha < 1, got {alpha}")
    if k == n:
        return n * ((1.0 - alpha) / (n - alpha)) ** (1.0 - alpha)
    rho = solve_rho_gcm(k, n)
    assert rho is not None
    if alpha >= 1.0 - ALPHA_BOUNDARY_SNAP:
        return order_pdf(OrderStatParams(k, n), rho)
    return math.exp((1.0 - alpha) * _log_gcm_power_integral(k, n, alpha, rho))


def _approach_config(k: int, n: int, means: Sequence[float], factor: float = 1000.0):
    from .extremal import IndepMinConfig, two_point_approach_family

    m_big = factor * max(means)
    return IndepMinConfig(two_point_approach_family(k, n, tuple(means), m_big))


def bound_independent_power(k: int, n: int, means: Sequence[float]) -> BoundReport:
    """Bound for the (n+1-k)-th moment of X_{k:n} under independent samples:
    the elementary symmetric polynomial e_{n+1-k} of the means.

    Attained for k = 1 (two-point components sharing one atom); for k >= 2
    it is approached, not attained, and the report's extremal descriptor is
    the approaching two-point configuration at a large representative atom.
    """
    means = tuple(float(m) for m in means)
    if len(means) != n:
        raise DomainError(f"expected n={n} means, got {len(means)}")
    bound = elementary_symmetric(means, n + 1 - k)
    if k == 1:
        from .extremal import IndepMinConfig, two_point_approach_family

        config = IndepMinConfig(two_point_approach_family(1, n, means, max(means)))
        return BoundReport(
            bound=bound,
            regime=Regime.BOUNDARY_POWER,
            attainability=Attainability.ATTAINED,
            extremal=config,
        )
    return BoundReport(
        bound=bound,
        regime=Regime.BOUNDARY_POWER,
        attainability=Attainability.BEST_POSSIBLE_NOT_ATTAINED,
        extremal=_approach_config(k, n, means),
    )


def _bound_iid(query: MomentQuery) -> BoundReport:
    from .extremal import (
        Degenerate,
        TwoPoint,
        heavy_tail_witness,
        quantile_extremal_low,
    )

    n, k, alpha, mu = query.n, query.k, query.alpha, query.mean
    power = n + 1 - k  # largest finite moment order
    near_power = abs(alpha - power) <= ALPHA_BOUNDARY_SNAP

    if k == 1:
        if near_power:
            return BoundReport(
                bound=mu**n,
                regime=Regime.MINIMUM_IID,
                attainability=Attainability.ATTAINED,
                constant_A=1.0,
                extremal=TwoPoint(zero_prob=0.5, atom=2.0 * mu),
                boundary_snapped=alpha != power,
            )
        if alpha > power:
            return BoundReport(
                bound=math.inf,
                regime=Regime.UNBOUNDED,
                attainability=Attainability.ATTAINED,
                extremal=heavy_tail_witness(mu),
            )
        return BoundReport(
            bound=mu**alpha,
            regime=Regime.MINIMUM_IID,
            attainability=Attainability.ATTAINED_BY_DEGENERATE,
            constant_A=1.0,
            extremal=Degenerate(mu),
        )

    if near_power:
        constant = math.comb(n, k - 1)
        return BoundReport(
            bound=constant * mu**power,
            regime=Regime.BOUNDARY_POWER,
            attainability=Attainability.BEST_POSSIBLE_NOT_ATTAINED,
            constant_A=float(constant),
            extremal=TwoPoint(zero_prob=1.0 - 1.0 / 1000.0, atom=1000.0 * mu),
            boundary_snapped=alpha != power,
        )
    if alpha > power:
        return BoundReport(
            bound=math.inf,
            regime=Regime.UNBOUNDED,
            attainability=Attainability.ATTAINED,
            extremal=heavy_tail_witness(mu),
        )

    if alpha >= 1.0:
        # only reachable for 2 <= k <= n-1: for k = n the interval
        # [1, n+1-k) is empty and alpha >= 1 was already dispatched above
        rho = solve_rho(k, n, alpha)
        constant = order_sf(OrderStatParams(k, n), rho) / (1.0 - rho) ** alpha
        return BoundReport(
            bound=constant * mu**alpha,
            regime=Regime.MID,
            attainability=Attainability.ATTAINED,
            constant_A=constant,
            rho=rho,
            extremal=TwoPoint(zero_prob=rho, atom=mu / (1.0 - rho)),
        )

    # 0 < alpha < 1
    snapped = alpha >= 1.0 - ALPHA_BOUNDARY_SNAP and k < n
    constant = constant_A_low(k, n, alpha)
    rho = solve_rho_gcm(k, n)
    if snapped:
        assert rho is not None
        extremal = TwoPoint(zero_prob=rho, atom=mu / (1.0 - rho))
    else:
        extremal = quantile_extremal_low(k, n, alpha, mu)
    return BoundReport(
        bound=constant * mu**alpha,
        regime=Regime.SUB_UNIT,
        attainability=Attainability.ATTAINED,
        constant_A=constant,
        rho=rho,
        extremal=extremal,
        boundary_snapped=snapped,
    )


def _bound_independent(query: MomentQuery) -> BoundReport:
    from .extremal import heavy_tail_witness, minimum_extremal_indep

    n, k, alpha = query.n, query.k, query.alpha
    if k == 1:
        near_top = abs(alpha - n) <= ALPHA_BOUNDARY_SNAP
        if alpha > n and not near_top:
            return BoundReport(
                bound=math.inf,
                regime=Regime.UNBOUNDED,
                attainability=Attainability.ATTAINED,
                extremal=heavy_tail_witness(min(query.means)),
            )
        order = tuple(sorted(range(n), key=lambda i: query.means[i]))
        sorted_means = tuple(query.means[i] for i in order)
        effective_alpha = float(n) if near_top else alpha
        m = math.ceil(effective_alpha)
        bound = math.prod(sorted_means[: m - 1]) * sorted_means[m - 1] ** (
            effective_alpha - m + 1
        )
        return BoundReport(
            bound=bound,
            regime=Regime.MINIMUM_INDEP,
            attainability=Attainability.ATTAINED,
            extremal=minimum_extremal_indep(sorted_means, effective_alpha),
            boundary_snapped=near_top and alpha != n,
            mean_order=order,
        )

    power = n + 1 - k
    if abs(alpha - power) <= ALPHA_BOUNDARY_SNAP:
        report = bound_independent_power(k, n, query.means)
        if alpha != power:
            report = BoundReport(
                bound=report.bound,
                regime=report.regime,
                attainability=report.attainability,
                extremal=report.extremal,
                boundary_snapped=True,
            )
        return report
    if alpha > power:
        return BoundReport(
            bound=math.inf,
            regime=Regime.UNBOUNDED,
            attainability=Attainability.ATTAINED,
            extremal=heavy_tail_witness(min(query.means)),
        )
    raise UnsupportedRegimeError(
        "no sharp bound is available for independent non-identical samples with "
        f"2 <= k <= n and alpha < n+1-k (got k={k}, n={n}, alpha={alpha})"
    )


def bound_moment(query: MomentQuery) -> BoundReport:
    """Dispatch a moment query to the matching regime and compute its bound.

    Finite bounds carry the equality-attaining (or approaching) extremal
    descriptor; unbounded regimes carry a heavy-tailed witness whose moment
    of the requested order is infinite.
    """
    if query.model is SampleModel.IID:
        return _bound_iid(query)
    return _bound_independent(query)
