"""Independent verification tools.

Exact order-statistic moments for finite-support laws (iid via the
composed distribution function, independent via a Poisson-binomial
exceedance count), quantile-quadrature moments, seeded Monte Carlo
estimation, a brute-force sharpness search over two-point laws, exact
closed sums for the nondecreasing step-function inequality, and randomized
property sweeps used by the command-line verifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .bounds import MomentQuery, SampleModel, bound_moment, solve_rho
from .errors import DomainError
from .kernel import OrderStatParams, _order_pdf01, order_sf
from .numerics import adaptive_quad
from .serialize import fmt17

_MC_CHUNK = 1 << 18


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite-support nonnegative law: (value, probability) atoms with
    strictly increasing values and probabilities summing to one."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise DomainError("a discrete law needs at least one atom")
        values = [v for v, _ in self.atoms]
        probs = [p for _, p in self.atoms]
        for v in values:
            if v < 0.0 or not math.isfinite(v):
                raise DomainError(f"atom values must be nonnegative and finite, got {v}")
        for a, b in zip(values, values[1:]):
            if not b > a:
                raise DomainError("atom values must be strictly increasing")
        for p in probs:
            if not p > 0.0:
                raise DomainError(f"atom probabilities must be positive, got {p}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise DomainError(f"atom probabilities must sum to 1, got {sum(probs)}")

    @classmethod
    def from_weighted(cls, values: Sequence[float], probs: Sequence[float]) -> "DiscreteDistribution":
        """Build from parallel arrays, sorting and merging duplicate values."""
        if len(values) != len(probs):
            raise DomainError("values and probs must have equal length")
        merged: dict[float, float] = {}
        for v, p in zip(values, probs):
            if p == 0.0:
                continue
            merged[float(v)] = merged.get(float(v), 0.0) + float(p)
        return cls(tuple(sorted(merged.items())))

    @classmethod
    def from_extremal(cls, dist) -> "DiscreteDistribution":
        """Convert a two-point or degenerate extremal variant."""
        return cls(dist.atoms())

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.atoms)

    @property
    def mean(self) -> float:
        return sum(v * p for v, p in self.atoms)

    def power_moment(self, alpha: float) -> float:
        return sum(v**alpha * p for v, p in self.atoms if v > 0.0)

    def cdf(self, x: float) -> float:
        total = 0.0
        for v, p in self.atoms:
            if v <= x:
                total += p
        return min(total, 1.0)

    def sf(self, x: float) -> float:
        total = 0.0
        for v, p in self.atoms:
            if v > x:
                total += p
        return total

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        cum = np.cumsum(self.probs)
        idx = np.searchsorted(cum, rng.random(size), side="right")
        return np.asarray(self.values, dtype=float)[np.minimum(idx, len(cum) - 1)]


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo estimate: sample mean, standard error, trial count."""

    mean: float
    stderr: float
    trials: int

    def to_payload(self) -> dict:
        return {"mean": fmt17(self.mean), "stderr": fmt17(self.stderr), "trials": str(self.trials)}


@dataclass(frozen=True)
class StepFunction:
    """Nondecreasing nonnegative step function on (0, 1).

    breakpoints are 0 = s_0 < s_1 < ... < s_K = 1; increments[j] is the
    jump entering piece j+1, so the value on (s_j, s_{j+1}] is the partial
    sum of the first j+1 increments.
    """

    breakpoints: tuple[float, ...]
    increments: tuple[float, ...]

    def __post_init__(self) -> None:
        bp = self.breakpoints
        if len(bp) < 2 or bp[0] != 0.0 or bp[-1] != 1.0:
            raise DomainError("breakpoints must run from 0.0 to 1.0")
        for a, b in zip(bp, bp[1:]):
            if not b > a:
                raise DomainError("breakpoints must be strictly increasing")
        if len(self.increments) != len(bp) - 1:
            raise DomainError("need exactly one increment per piece")
        for d in self.increments:
            if d < 0.0:
                raise DomainError(f"increments must be nonnegative, got {d}")

    @property
    def levels(self) -> tuple[float, ...]:
        out = []
        total = 0.0
        for d in self.increments:
            total += d
            out.append(total)
        return tuple(out)

    def value(self, t: float) -> float:
        if not 0.0 < t <= 1.0:
            raise DomainError(f"t must lie in (0, 1], got {t}")
        for s, level in zip(self.breakpoints[1:], self.levels):
            if t <= s:
                return level
        return self.levels[-1]

    def integral(self) -> float:
        """Exact integral over (0, 1): sum of (1 - s_{j-1}) * increment_j."""
        return sum(
            (1.0 - s) * d for s, d in zip(self.breakpoints[:-1], self.increments)
        )


def step_power_inequality(g: StepFunction, alpha: float) -> tuple[float, float]:
    """Exact closed sums for the two sides of the tail-weighted power
    inequality for nondecreasing step functions (alpha > 1):

      lhs = alpha * int_0^1 (1-t)^(alpha-1) g(t)^alpha dt
          = g_1^alpha + sum_j (1-s_j)^alpha (g_{j+1}^alpha - g_j^alpha)
      rhs = (int_0^1 g)^alpha

    where g_j are the piece levels. lhs <= rhs always, with equality for
    constant g and for a single jump from zero.
    """
    if not alpha > 1.0:
        raise DomainError(f"the inequality requires alpha > 1, got {alpha}")
    levels = g.levels
    lhs = levels[0] ** alpha
    for j in range(len(levels) - 1):
        s_j = g.breakpoints[j + 1]
        lhs += (1.0 - s_j) ** alpha * (levels[j + 1] ** alpha - levels[j] ** alpha)
    rhs = g.integral() ** alpha
    return lhs, rhs


def exact_moment_iid_discrete(
    dist: DiscreteDistribution, k: int, n: int, alpha: float
) -> float:
    """E(X_{k:n})^alpha for n iid copies of a finite-support law, exactly.

    The order statistic's df is G_{k:n} composed with the law's df, so the
    moment is a finite sum of G-increments at the atoms. The increments are
    differenced on the survival side, which stays accurate for laws that
    put small probabilities on large atoms (the shape the sharp bounds are
    about); the distribution side would cancel against 1 there.
    """
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    params = OrderStatParams(k, n)
    total = 0.0
    cum_prev = 0.0
    sf_prev = 1.0
    for v, p in dist.atoms:
        cum = min(cum_prev + p, 1.0)
        sf_here = order_sf(params, cum)
        if v > 0.0:
            total += v**alpha * (sf_prev - sf_here)
        cum_prev = cum
        sf_prev = sf_here
    return total


def _exceedance_tail(survivals: Sequence[float], need: int) -> float:
    """P(at least `need` of the independent indicators fire), by the
    Poisson-binomial dynamic program over the success counts."""
    counts = np.zeros(len(survivals) + 1)
    counts[0] = 1.0
    filled = 0
    for s in survivals:
        filled += 1
        head = counts[: filled + 1].copy()
        counts[: filled + 1] = head * (1.0 - s)
        counts[1 : filled + 1] += head[:filled] * s
    return float(np.sum(counts[need:]))


def exact_moment_indep_discrete(
    dists: Sequence[DiscreteDistribution], k: int, alpha: float
) -> float:
    """E(X_{k:n})^alpha for independent finite-support components, exactly.

    P(X_{k:n} > x) is the probability that at least n+1-k components exceed
    x (a Poisson-binomial tail over the per-component survivals); the
    moment accumulates x^alpha increments of that piecewise-constant
    survival function over the merged support.
    """
    n = len(dists)
    if n < 1:
        raise DomainError("need at least one component")
    if not 1 <= k <= n:
        raise DomainError(f"rank must satisfy 1 <= k <= n={n}, got {k}")
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    need = n + 1 - k
    support = sorted({v for d in dists for v in d.values if v > 0.0})
    total = 0.0
    prev_value = 0.0
    # survival of the order statistic on [0, first positive atom); equals 1
    # unless some component carries mass at zero
    prev_surv = _exceedance_tail([d.sf(0.0) for d in dists], need)
    for v in support:
        total += prev_surv * (v**alpha - prev_value**alpha)
        prev_surv = _exceedance_tail([d.sf(v) for d in dists], need)
        prev_value = v
    return total


def moment_from_quantile(
    qf,
    k: int,
    n: int,
    alpha: float,
    *,
    breakpoints: Optional[Sequence[float]] = None,
    rel_tol: float = 1e-9,
) -> float:
    """E(X_{k:n})^alpha = int_0^1 g_{k:n}(u) qf(u)^alpha du for iid samples
    drawn from the law with quantile function qf.

    Piecewise-constant quantiles (objects exposing quantile_steps) are
    summed exactly through G-increments; everything else goes through
    adaptive quadrature, splitting at the declared breakpoints.
    """
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    params = OrderStatParams(k, n)
    steps = getattr(qf, "quantile_steps", None)
    if steps is not None:
        total = 0.0
        sf_prev = 1.0
        for u, value in steps():
            sf_here = order_sf(params, u)
            if value > 0.0:
                total += value**alpha * (sf_prev - sf_here)
            sf_prev = sf_here
        return total
    if breakpoints is None:
        breakpoints = tuple(getattr(qf, "breakpoints", ()))
    fn = qf.quantile if hasattr(qf, "quantile") else qf

    def integrand(u: float) -> float:
        density = _order_pdf01(params, u)
        if density == 0.0:
            return 0.0
        return density * float(fn(u)) ** alpha

    return adaptive_quad(integrand, 0.0, 1.0, rel_tol=rel_tol, breakpoints=breakpoints)


def mc_estimate_moment(
    dists: Sequence, k: int, alpha: float, trials: int, seed: int
) -> MomentEstimate:
    """Seeded Monte Carlo estimate of E(X_{k:n})^alpha for independent
    components with samplers; chunked, with a streaming combine so the
    result is reproducible for a given seed."""
    n = len(dists)
    if not 1 <= k <= n:
        raise DomainError(f"rank must satisfy 1 <= k <= n={n}, got {k}")
    if trials < 10**3:
        raise DomainError(f"need at least 1000 trials, got {trials}")
    rng = np.random.default_rng(seed)
    count = 0
    mean = 0.0
    m2 = 0.0
    remaining = trials
    while remaining > 0:
        m = min(_MC_CHUNK, remaining)
        draws = np.column_stack([np.asarray(d.sample(rng, m), dtype=float) for d in dists])
        draws.sort(axis=1)
        values = draws[:, k - 1] ** alpha
        c_mean = float(values.mean())
        c_m2 = float(((values - c_mean) ** 2).sum())
        delta = c_mean - mean
        total = count + m
        mean += delta * m / total
        m2 += c_m2 + delta * delta * count * m / total
        count = total
        remaining -= m
    stderr = math.sqrt(m2 / (count - 1)) / math.sqrt(count) if count > 1 else 0.0
    return MomentEstimate(mean=mean, stderr=stderr, trials=trials)


def sharpness_search_two_point(
    k: int, n: int, alpha: float, mu: float, grid_size: int
) -> tuple[float, float]:
    """Exhaustive search over zero-inflated two-point laws on a uniform
    zero-mass grid; returns (argmax, max) of the exact order-statistic
    moment. The argmax lands within one grid spacing of the analytic root."""
    if grid_size < 100:
        raise DomainError(f"grid_size must be at least 100, got {grid_size}")
    params = OrderStatParams(k, n)
    best_rho = 0.0
    best_val = -math.inf
    for i in range(1, grid_size):
        rho = i / grid_size
        value = (mu / (1.0 - rho)) ** alpha * order_sf(params, rho)
        if value > best_val:
            best_val = value
            best_rho = rho
    return best_rho, best_val


def survival_power_functional(dist: DiscreteDistribution, alpha: float) -> float:
    """alpha * int_0^inf x^(alpha-1) (1 - F(x))^alpha dx for a finite-support
    law, as an exact sum over the piecewise-constant survival function."""
    if not alpha > 1.0:
        raise DomainError(f"the functional is used with alpha > 1, got {alpha}")
    total = 0.0
    prev_v = 0.0
    prev_sf = 1.0 if dist.values[0] > 0.0 else dist.sf(0.0)
    for v in dist.values:
        if v > 0.0:
            total += prev_sf**alpha * (v**alpha - prev_v**alpha)
            prev_v = v
        prev_sf = dist.sf(v)
    return total


def partial_power_moment(
    sf: Callable[[float], float],
    alpha: float,
    lower: float,
    upper: float,
    *,
    n_components: int = 1,
    rel_tol: float = 1e-9,
) -> float:
    """alpha * int_lower^upper x^(alpha-1) sf(x)^n dx by quadrature in the
    log variable (the ranges of interest span many decades)."""
    if not 0.0 < lower < upper:
        raise DomainError("need 0 < lower < upper")

    def integrand(t: float) -> float:
        x = math.exp(t)
        return alpha * math.exp(alpha * t) * float(sf(x)) ** n_components

    return adaptive_quad(integrand, math.log(lower), math.log(upper), rel_tol=rel_tol)


# ---------------------------------------------------------------------------
# randomized case generators and property sweeps
# ---------------------------------------------------------------------------


def random_discrete(
    rng: np.random.Generator, mean: float, max_atoms: int = 6
) -> DiscreteDistribution:
    """Random finite-support law with the exact requested mean.

    The mean is enforced by rescaling atom values (not probabilities),
    which preserves the fixed-mean, free-shape constraint class.
    """
    m = int(rng.integers(2, max_atoms + 1))
    values = np.cumsum(rng.exponential(1.0, size=m))
    if rng.random() < 0.3:
        values[0] = 0.0
    probs = rng.dirichlet(np.ones(m))
    raw_mean = float(values @ probs)
    values = values * (mean / raw_mean)
    return DiscreteDistribution.from_weighted(values.tolist(), probs.tolist())


def random_step_function(rng: np.random.Generator, max_pieces: int = 6) -> StepFunction:
    pieces = int(rng.integers(1, max_pieces + 1))
    interior = np.sort(rng.random(pieces - 1))
    breakpoints = (0.0, *interior.tolist(), 1.0)
    increments = rng.exponential(1.0, size=pieces)
    increments[rng.random(pieces) < 0.2] = 0.0
    return StepFunction(breakpoints=breakpoints, increments=tuple(increments.tolist()))


@dataclass(frozen=True)
class SweepResult:
    suite: str
    cases: int
    violations: int
    worst_slack: float
    worst_case: dict = field(default_factory=dict)
    first_violation: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_payload(self) -> dict:
        out = {
            "suite": self.suite,
            "cases": str(self.cases),
            "violations": str(self.violations),
            "worst_slack": fmt17(self.worst_slack),
            "worst_case": self.worst_case,
        }
        if self.first_violation is not None:
            out["first_violation"] = self.first_violation
        return out


_SLACK_TOL = 1e-12  # floating-point forgiveness when comparing to a sharp bound


def sweep_bound_validity(cases: int = 1000, seed: int = 0, n_max: int = 6) -> SweepResult:
    """Random finite-support laws never exceed the computed bounds across
    every finite regime on a small (n, k, alpha) grid."""
    rng = np.random.default_rng(seed)
    mean = 1.0
    grid: list[tuple[int, int, float, float]] = []
    for n in range(2, n_max + 1):
        combos: list[tuple[int, float]] = [(1, 0.5), (1, 1.0), (1, float(n))]
        combos += [(n, 0.5), (n, 1.0)]
        for k in range(2, n):
            top = n + 1 - k
            for alpha in (0.5, 1.0, 1.0 + (top - 1.0) / 2.0, float(top)):
                combos.append((k, alpha))
        for k, alpha in combos:
            query = MomentQuery(SampleModel.IID, n, k, alpha, (mean,))
            report = bound_moment(query)
            if not report.is_unbounded:
                grid.append((n, k, alpha, report.bound))
    violations = 0
    worst = -math.inf
    worst_case: dict = {}
    first: Optional[dict] = None
    for _ in range(cases):
        dist = random_discrete(rng, mean)
        for n, k, alpha, bound in grid:
            value = exact_moment_iid_discrete(dist, k, n, alpha)
            slack = value / bound - 1.0
            if slack > worst:
                worst = slack
                worst_case = {
                    "n": str(n),
                    "k": str(k),
                    "alpha": fmt17(alpha),
                    "moment": fmt17(value),
                    "bound": fmt17(bound),
                }
            if slack > _SLACK_TOL:
                violations += 1
                if first is None:
                    first = dict(worst_case, atoms=[[fmt17(v), fmt17(p)] for v, p in dist.atoms])
    return SweepResult("sweep", cases, violations, worst, worst_case, first)


def sweep_survival_power(
    cases: int = 1000, seed: int = 0, alphas: Sequence[float] = (1.5, 2.0, 2.7)
) -> SweepResult:
    """alpha int x^(alpha-1) (1-F)^alpha dx never exceeds mean^alpha."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst = -math.inf
    worst_case: dict = {}
    first: Optional[dict] = None
    for _ in range(cases):
        mean = float(rng.uniform(0.3, 3.0))
        dist = random_discrete(rng, mean)
        for alpha in alphas:
            lhs = survival_power_functional(dist, alpha)
            rhs = mean**alpha
            slack = lhs / rhs - 1.0
            if slack > worst:
                worst = slack
                worst_case = {"alpha": fmt17(alpha), "lhs": fmt17(lhs), "rhs": fmt17(rhs)}
            if slack > _SLACK_TOL:
                violations += 1
                if first is None:
                    first = dict(worst_case, atoms=[[fmt17(v), fmt17(p)] for v, p in dist.atoms])
    return SweepResult("survival_power", cases, violations, worst, worst_case, first)


def sweep_step_inequality(
    cases: int = 10000, seed: int = 0, alphas: Sequence[float] = (1.1, 2.0, 3.5)
) -> SweepResult:
    """lhs <= rhs for random nondecreasing step functions."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst = -math.inf
    worst_case: dict = {}
    first: Optional[dict] = None
    for _ in range(cases):
        step = random_step_function(rng)
        for alpha in alphas:
            lhs, rhs = step_power_inequality(step, alpha)
            scale = max(rhs, 1e-300)
            slack = (lhs - rhs) / scale
            if slack > worst:
                worst = slack
                worst_case = {"alpha": fmt17(alpha), "lhs": fmt17(lhs), "rhs": fmt17(rhs)}
            if slack > _SLACK_TOL:
                violations += 1
                if first is None:
                    first = dict(
                        worst_case,
                        breakpoints=[fmt17(s) for s in step.breakpoints],
                        increments=[fmt17(d) for d in step.increments],
                    )
    return SweepResult("stepfn", cases, violations, worst, worst_case, first)


def sweep_min_vs_root_moment(cases: int = 1000, seed: int = 0, n_max: int = 4) -> SweepResult:
    """E X_{1:N} <= (E X^(1/n))^n for N >= n, on random finite-support laws."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst = -math.inf
    worst_case: dict = {}
    first: Optional[dict] = None
    for _ in range(cases):
        dist = random_discrete(rng, float(rng.uniform(0.3, 3.0)))
        for n in range(2, n_max + 1):
            rhs = dist.power_moment(1.0 / n) ** n
            for big_n in (n, n + 2):
                lhs = exact_moment_iid_discrete(dist, 1, big_n, 1.0)
                slack = lhs / rhs - 1.0 if rhs > 0 else -1.0
                if slack > worst:
                    worst = slack
                    worst_case = {
                        "n": str(n),
                        "N": str(big_n),
                        "lhs": fmt17(lhs),
                        "rhs": fmt17(rhs),
                    }
                if slack > _SLACK_TOL:
                    violations += 1
                    if first is None:
                        first = dict(
                            worst_case, atoms=[[fmt17(v), fmt17(p)] for v, p in dist.atoms]
                        )
    return SweepResult("min_vs_root", cases, violations, worst, worst_case, first)


def sweep_sharpness(
    triples: Sequence[tuple[int, int, float]] = ((2, 5, 2.0), (2, 3, 1.0), (3, 5, 1.5)),
    grid_size: int = 10**4,
    mu: float = 1.0,
) -> SweepResult:
    """Grid argmax over two-point laws matches the analytic root and never
    exceeds the bound."""
    violations = 0
    worst = -math.inf
    worst_case: dict = {}
    first: Optional[dict] = None
    for k, n, alpha in triples:
        rho_star, value_star = sharpness_search_two_point(k, n, alpha, mu, grid_size)
        rho = solve_rho(k, n, alpha)
        report = bound_moment(MomentQuery(SampleModel.IID, n, k, alpha, (mu,)))
        offset = abs(rho_star - rho)
        slack = value_star / report.bound - 1.0
        case = {
            "k": str(k),
            "n": str(n),
            "alpha": fmt17(alpha),
            "rho_grid": fmt17(rho_star),
            "rho": fmt17(rho),
            "max": fmt17(value_star),
            "bound": fmt17(report.bound),
        }
        score = max(slack, offset - 2.0 / grid_size)
        if score > worst:
            worst = score
            worst_case = case
        if offset > 2.0 / grid_size or slack > _SLACK_TOL:
            violations += 1
            if first is None:
                first = case
    return SweepResult("sharpness", len(triples), violations, worst, worst_case, first)


def witness_divergence() -> SweepResult:
    """Partial moment integrals of the witnesses grow without bound, while
    their means stay at the advertised values."""
    from .extremal import heavy_tail_witness, log_square_witness

    heavy = heavy_tail_witness(1.0)
    t_grid = (1e3, 1e5, 1e7, 1e9)
    partials = [
        partial_power_moment(heavy.sf, 1.5, 0.5, t, rel_tol=1e-9) for t in t_grid
    ]
    increasing = all(b > a for a, b in zip(partials, partials[1:]))
    ratio_heavy = partials[-1] / partials[0]

    logsq = log_square_witness(2.0 * math.e)  # scale 1: the base law itself
    # divergence of the minimum's 2.5-th moment is genuine but slow, like
    # sqrt(T) / log(T)^4; doubling needs T around 1e12
    min_partials = [
        partial_power_moment(logsq.sf, 2.5, math.e, t, n_components=2, rel_tol=1e-9)
        for t in (1e3, 1e6, 1e9, 1e12)
    ]
    logsq_increasing = all(b > a for a, b in zip(min_partials, min_partials[1:]))
    ratio_logsq = min_partials[-1] / min_partials[0]

    ok = (
        increasing
        and logsq_increasing
        and ratio_heavy > 10.0
        and ratio_logsq > 2.0
        and heavy.mean == 1.0
    )
    case = {
        "heavy_partials": [fmt17(p) for p in partials],
        "heavy_ratio": fmt17(ratio_heavy),
        "log_square_partials": [fmt17(p) for p in min_partials],
        "log_square_ratio": fmt17(ratio_logsq),
    }
    return SweepResult(
        "witness",
        cases=len(t_grid) + len(min_partials),
        violations=0 if ok else 1,
        worst_slack=-ratio_heavy,
        worst_case=case,
        first_violation=None if ok else case,
    )
