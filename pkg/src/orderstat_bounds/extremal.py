"""Equality-attaining distributions and non-integrability witnesses.

Every variant is immutable after construction and exposes cdf, quantile
(the left-continuous inverse), an exact analytic mean, and an
inverse-transform sampler driven by an explicit numpy Generator, so that
identical seeds give identical draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .errors import DomainError
from .kernel import OrderStatParams, log_order_pdf
from .numerics import bisect_root_vec
from .serialize import fmt17

_E = math.e


def _as_array(u) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    return arr, arr.ndim == 0


def _maybe_scalar(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


@dataclass(frozen=True)
class TwoPoint:
    """Mass zero_prob at 0 and the rest at a positive atom."""

    zero_prob: float
    atom: float

    variant = "two_point"

    def __post_init__(self) -> None:
        if not 0.0 <= self.zero_prob < 1.0:
            raise DomainError(f"zero_prob must lie in [0, 1), got {self.zero_prob}")
        if not (self.atom > 0.0 and math.isfinite(self.atom)):
            raise DomainError(f"atom must be positive and finite, got {self.atom}")

    @property
    def mean(self) -> float:
        return self.atom * (1.0 - self.zero_prob)

    def cdf(self, x):
        x, scalar = _as_array(x)
        out = np.where(x < 0.0, 0.0, np.where(x < self.atom, self.zero_prob, 1.0))
        return _maybe_scalar(out, scalar)

    def quantile(self, u):
        u, scalar = _as_array(u)
        out = np.where(u <= self.zero_prob, 0.0, self.atom)
        return _maybe_scalar(out, scalar)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.asarray(self.quantile(rng.random(size)))

    def atoms(self) -> tuple[tuple[float, float], ...]:
        """(value, probability) pairs with zero-probability entries dropped."""
        if self.zero_prob == 0.0:
            return ((self.atom, 1.0),)
        return ((0.0, self.zero_prob), (self.atom, 1.0 - self.zero_prob))

    def quantile_steps(self) -> tuple[tuple[float, float], ...]:
        """Piecewise-constant quantile: value on (prev_u, u] per entry."""
        if self.zero_prob == 0.0:
            return ((1.0, self.atom),)
        return ((self.zero_prob, 0.0), (1.0, self.atom))

    def to_payload(self) -> dict:
        return {
            "variant": self.variant,
            "zero_prob": fmt17(self.zero_prob),
            "atom": fmt17(self.atom),
        }


@dataclass(frozen=True)
class Degenerate:
    """Point mass at a positive value."""

    value: float

    variant = "degenerate"

    def __post_init__(self) -> None:
        if not (self.value > 0.0 and math.isfinite(self.value)):
            raise DomainError(f"value must be positive and finite, got {self.value}")

    @property
    def mean(self) -> float:
        return self.value

    def cdf(self, x):
        x, scalar = _as_array(x)
        return _maybe_scalar(np.where(x >= self.value, 1.0, 0.0), scalar)

    def quantile(self, u):
        u, scalar = _as_array(u)
        return _maybe_scalar(np.full_like(u, self.value), scalar)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        rng.random(size)  # keep the stream position consistent with other variants
        return np.full(size, self.value)

    def atoms(self) -> tuple[tuple[float, float], ...]:
        return ((self.value, 1.0),)

    def quantile_steps(self) -> tuple[tuple[float, float], ...]:
        return ((1.0, self.value),)

    def to_payload(self) -> dict:
        return {"variant": self.variant, "value": fmt17(self.value)}


@dataclass(frozen=True)
class BetaPowerQuantile:
    """Law whose quantile is a normalized power of the truncated Beta density.

    F^{-1}(u) = mean * gbar(u)^q / int_0^1 gbar^q, with q = 1/(1-alpha) and
    gbar(u) = g_{k:n}(min(u, rho_gcm)). The quantile rises on (0, rho_gcm)
    and is flat above it, ending in an atom at the top value.
    """

    k: int
    n: int
    alpha: float
    rho_gcm: float
    mean: float
    log_norm: float  # log of int_0^1 gbar^q du

    variant = "beta_power_quantile"

    @property
    def _q(self) -> float:
        return 1.0 / (1.0 - self.alpha)

    @cached_property
    def _params(self) -> OrderStatParams:
        return OrderStatParams(self.k, self.n)

    @cached_property
    def top(self) -> float:
        """Right end of the support (the flat quantile level)."""
        return math.exp(
            math.log(self.mean)
            - self.log_norm
            + self._q * log_order_pdf(self._params, self.rho_gcm)
        )

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Quadrature should split at the minorant tangency point."""
        return (self.rho_gcm,)

    def _log_pdf_vec(self, u: np.ndarray) -> np.ndarray:
        k, n = self.k, self.n
        with np.errstate(divide="ignore"):
            return (
                -self._params.log_beta
                + (k - 1) * np.log(u)
                + (n - k) * np.log1p(-u)
            )

    def quantile(self, u):
        u, scalar = _as_array(u)
        clipped = np.minimum(u, self.rho_gcm)
        logs = math.log(self.mean) - self.log_norm + self._q * self._log_pdf_vec(clipped)
        return _maybe_scalar(np.exp(logs), scalar)

    def cdf(self, x):
        x, scalar = _as_array(x)
        out = np.zeros_like(x)
        out[x >= self.top] = 1.0
        interior = (x > 0.0) & (x < self.top)
        if np.any(interior):
            target = (
                np.log(x[interior]) - math.log(self.mean) + self.log_norm
            ) / self._q

            def gap(u: np.ndarray) -> np.ndarray:
                return self._log_pdf_vec(np.clip(u, 1e-300, None)) - target

            lo = np.full(target.shape, 1e-300)
            hi = np.full(target.shape, self.rho_gcm)
            out[interior] = bisect_root_vec(gap, lo, hi)
        return _maybe_scalar(out, scalar)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.asarray(self.quantile(rng.random(size)))

    def to_payload(self) -> dict:
        return {
            "variant": self.variant,
            "k": str(self.k),
            "n": str(self.n),
            "alpha": fmt17(self.alpha),
            "rho_gcm": fmt17(self.rho_gcm),
            "mean": fmt17(self.mean),
            "top": fmt17(self.top),
        }


@dataclass(frozen=True)
class PowerLaw:
    """Power-type law attaining the sub-unit bound for the sample maximum.

    F^{-1}(u) = mean ((n-alpha)/(1-alpha)) u^((n-1)/(1-alpha)) on (0, 1).
    """

    n: int
    alpha: float
    mean: float

    variant = "power_law"

    @property
    def top(self) -> float:
        return self.mean * (self.n - self.alpha) / (1.0 - self.alpha)

    @property
    def _exponent(self) -> float:
        return (self.n - 1) / (1.0 - self.alpha)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def quantile(self, u):
        u, scalar = _as_array(u)
        return _maybe_scalar(self.top * u**self._exponent, scalar)

    def cdf(self, x):
        x, scalar = _as_array(x)
        ratio = np.clip(x / self.top, 0.0, 1.0)
        return _maybe_scalar(ratio ** (1.0 / self._exponent), scalar)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.asarray(self.quantile(rng.random(size)))

    def to_payload(self) -> dict:
        return {
            "variant": self.variant,
            "n": str(self.n),
            "alpha": fmt17(self.alpha),
            "mean": fmt17(self.mean),
            "top": fmt17(self.top),
        }


class _BisectedQuantileMixin:
    """Quantile via vectorized bisection of a closed-form survival function."""

    def quantile(self, u):
        u, scalar = _as_array(u)
        flat = np.atleast_1d(u)
        lo = np.full(flat.shape, self._support_left())
        hi = np.full(flat.shape, 2.0 * self._support_left() + 1.0)
        # grow the bracket geometrically until the cdf exceeds every target
        for _ in range(200):
            short = np.asarray(self.cdf(hi)) < flat
            if not np.any(short):
                break
            hi = np.where(short, 2.0 * hi, hi)

        def gap(x: np.ndarray) -> np.ndarray:
            return np.asarray(self.cdf(x)) - flat

        roots = bisect_root_vec(gap, lo, hi, iterations=120)
        out = roots.reshape(np.shape(u))
        return _maybe_scalar(out, scalar)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.asarray(self.quantile(rng.random(size)))

    @property
    def median(self) -> float:
        return float(np.asarray(self.quantile(0.5)))


@dataclass(frozen=True)
class HeavyTailWitness(_BisectedQuantileMixin):
    """Law with the given mean whose moments of order above 1 all diverge.

    Survival 1 for x <= mean/2, then 1 / ((2x/mean) (1 + log(2x/mean))^2);
    scaling the mean scales the law linearly.
    """

    mean: float

    variant = "heavy_tail_witness"

    def __post_init__(self) -> None:
        if not (self.mean > 0.0 and math.isfinite(self.mean)):
            raise DomainError(f"mean must be positive and finite, got {self.mean}")

    def _support_left(self) -> float:
        return 0.5 * self.mean

    def sf(self, x):
        x, scalar = _as_array(x)
        y = np.maximum(2.0 * x / self.mean, 1.0)
        with np.errstate(divide="ignore"):
            tail = 1.0 / (y * (1.0 + np.log(y)) ** 2)
        return _maybe_scalar(tail, scalar)

    def cdf(self, x):
        x, scalar = _as_array(x)
        return _maybe_scalar(1.0 - np.asarray(self.sf(x)), scalar)

    def has_finite_moment(self, alpha: float) -> bool:
        return 0.0 < alpha <= 1.0

    def to_payload(self) -> dict:
        return {"variant": self.variant, "mean": fmt17(self.mean)}


@dataclass(frozen=True)
class LogSquareTail(_BisectedQuantileMixin):
    """Scaled version of the law with df 1 - e / (x (log x)^2) on [e, inf).

    The base law has mean 2e; the stored mean rescales it linearly. The
    minimum of n copies has infinite moments of every order above n.
    """

    mean: float

    variant = "log_square_tail"

    unscaled_mean = 2.0 * _E

    def __post_init__(self) -> None:
        if not (self.mean > 0.0 and math.isfinite(self.mean)):
            raise DomainError(f"mean must be positive and finite, got {self.mean}")

    @property
    def scale(self) -> float:
        return self.mean / self.unscaled_mean

    def _support_left(self) -> float:
        return _E * self.scale

    def sf(self, x):
        x, scalar = _as_array(x)
        y = np.maximum(x / self.scale, _E)
        tail = _E / (y * np.log(y) ** 2)
        return _maybe_scalar(np.where(x / self.scale <= _E, 1.0, tail), scalar)

    def cdf(self, x):
        x, scalar = _as_array(x)
        return _maybe_scalar(1.0 - np.asarray(self.sf(x)), scalar)

    def to_payload(self) -> dict:
        return {"variant": self.variant, "mean": fmt17(self.mean)}


ScalarExtremal = Union[TwoPoint, Degenerate, BetaPowerQuantile, PowerLaw, HeavyTailWitness, LogSquareTail]


@dataclass(frozen=True)
class IndepMinConfig:
    """Independent components (two-point or degenerate), one law per slot."""

    components: tuple[Union[TwoPoint, Degenerate], ...]

    variant = "indep_min_config"

    def __post_init__(self) -> None:
        if not self.components:
            raise DomainError("configuration needs at least one component")

    @property
    def means(self) -> tuple[float, ...]:
        return tuple(c.mean for c in self.components)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """One row per replicate, one column per component."""
        return np.column_stack([c.sample(rng, size) for c in self.components])

    def min_sf(self, x) -> float:
        """Survival of the componentwise minimum."""
        out = 1.0
        for c in self.components:
            out = out * (1.0 - np.asarray(c.cdf(x)))
        return out

    def to_payload(self) -> dict:
        return {
            "variant": self.variant,
            "components": [c.to_payload() for c in self.components],
        }


ExtremalDistribution = Union[ScalarExtremal, IndepMinConfig]


def two_point_extremal(k: int, n: int, alpha: float, mu: float) -> TwoPoint:
    """Zero-inflated two-point law attaining the interior-rank bound for
    1 <= alpha < n+1-k: mass rho at 0 and mu/(1-rho) otherwise."""
    from .bounds import solve_rho

    if not (mu > 0.0 and math.isfinite(mu)):
        raise DomainError(f"mean must be positive and finite, got {mu}")
    rho = solve_rho(k, n, alpha)
    return TwoPoint(zero_prob=rho, atom=mu / (1.0 - rho))


def quantile_extremal_low(
    k: int, n: int, alpha: float, mu: float
) -> Union[BetaPowerQuantile, PowerLaw]:
    """Law attaining the sub-unit bound (0 < alpha < 1) for 2 <= k <= n."""
    from .bounds import _log_gcm_power_integral, solve_rho_gcm

    if not (mu > 0.0 and math.isfinite(mu)):
        raise DomainError(f"mean must be positive and finite, got {mu}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"sub-unit regime requires 0 < alpha < 1, got {alpha}")
    if not 2 <= k <= n:
        raise DomainError(f"sub-unit regime requires 2 <= k <= n, got k={k}, n={n}")
    if k == n:
        return PowerLaw(n=n, alpha=alpha, mean=mu)
    rho = solve_rho_gcm(k, n)
    assert rho is not None
    log_norm = _log_gcm_power_integral(k, n, alpha, rho)
    return BetaPowerQuantile(k=k, n=n, alpha=alpha, rho_gcm=rho, mean=mu, log_norm=log_norm)


def minimum_extremal_indep(means: tuple[float, ...], alpha: float) -> IndepMinConfig:
    """Configuration attaining the independent-minimum bound.

    means must be ascending. With m the integer satisfying
    m-1 < alpha <= m, components up to m share the atom means[m-1] (hit
    with probability mu_i / mu_m), later components are degenerate.
    """
    means = tuple(float(m) for m in means)
    n = len(means)
    if n == 0:
        raise DomainError("means must be nonempty")
    for a, b in zip(means, means[1:]):
        if b < a:
            raise DomainError("means must be sorted ascending")
    for m in means:
        if not (m > 0.0 and math.isfinite(m)):
            raise DomainError(f"means must be strictly positive and finite, got {m}")
    if not (0.0 < alpha <= n):
        raise DomainError(
            f"no finite sharp bound for the minimum beyond moment order n={n}, got alpha={alpha}"
        )
    m = math.ceil(alpha)
    atom = means[m - 1]
    components: list[Union[TwoPoint, Degenerate]] = []
    for i, mu in enumerate(means):
        if i < m:
            components.append(TwoPoint(zero_prob=1.0 - mu / atom, atom=atom))
        else:
            components.append(Degenerate(mu))
    return IndepMinConfig(tuple(components))


def two_point_approach_family(
    k: int, n: int, means: tuple[float, ...], big_atom: float
) -> tuple[TwoPoint, ...]:
    """Independent two-point components P(X_i = M) = mu_i / M sharing one
    large atom M; their (n+1-k)-th order-statistic moment approaches the
    elementary-symmetric bound as M grows."""
    means = tuple(float(m) for m in means)
    if len(means) != n:
        raise DomainError(f"expected n={n} means, got {len(means)}")
    if big_atom < max(means):
        raise DomainError(
            f"shared atom must dominate every mean, got M={big_atom} < max={max(means)}"
        )
    return tuple(TwoPoint(zero_prob=1.0 - mu / big_atom, atom=big_atom) for mu in means)


def heavy_tail_witness(mu: float) -> HeavyTailWitness:
    """Mean-mu law whose alpha-moment is finite iff alpha <= 1."""
    return HeavyTailWitness(mean=mu)


def log_square_witness(mu: float) -> LogSquareTail:
    """Mean-mu law whose sample minimum of n copies has infinite (n+d)-th
    moments for every d > 0."""
    return LogSquareTail(mean=mu)
