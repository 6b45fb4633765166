import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from orderstat_bounds import (
    Degenerate,
    DiscreteDistribution,
    DomainError,
    MomentQuery,
    SampleModel,
    StepFunction,
    TwoPoint,
    bound_moment,
    constant_A_low,
    exact_moment_iid_discrete,
    exact_moment_indep_discrete,
    mc_estimate_moment,
    moment_from_quantile,
    partial_power_moment,
    quantile_extremal_low,
    sharpness_search_two_point,
    solve_rho,
    step_power_inequality,
    survival_power_functional,
)
from orderstat_bounds.oracle import (
    random_discrete,
    random_step_function,
    sweep_bound_validity,
    sweep_min_vs_root_moment,
    sweep_step_inequality,
    sweep_survival_power,
)


class TestDiscreteDistribution:
    def test_validation(self):
        with pytest.raises(DomainError):
            DiscreteDistribution(((1.0, 0.5), (1.0, 0.5)))  # not strictly increasing
        with pytest.raises(DomainError):
            DiscreteDistribution(((-1.0, 1.0),))
        with pytest.raises(DomainError):
            DiscreteDistribution(((0.0, 0.5), (1.0, 0.4)))  # probs sum != 1

    def test_from_weighted_merges(self):
        d = DiscreteDistribution.from_weighted([2.0, 1.0, 2.0], [0.25, 0.5, 0.25])
        assert d.values == (1.0, 2.0)
        assert d.probs == (0.5, 0.5)

    def test_mean_and_moment(self):
        d = DiscreteDistribution(((0.0, 0.5), (2.0, 0.5)))
        assert d.mean == pytest.approx(1.0)
        assert d.power_moment(2.0) == pytest.approx(2.0)


class TestExactMomentIid:
    def test_two_point_closed_value(self):
        d = DiscreteDistribution(((0.0, 1 / 6), (6 / 5, 5 / 6)))
        assert exact_moment_iid_discrete(d, 2, 5, 2.0) == pytest.approx(
            125 / 108, rel=1e-13
        )

    def test_degenerate(self):
        d = DiscreteDistribution(((1.7, 1.0),))
        for k, n in [(1, 4), (3, 5)]:
            assert exact_moment_iid_discrete(d, k, n, 2.5) == pytest.approx(
                1.7**2.5, rel=1e-14
            )

    def test_minimum_top_order_equality(self):
        d = DiscreteDistribution(((0.0, 0.5), (2.0, 0.5)))
        assert exact_moment_iid_discrete(d, 1, 3, 3.0) == pytest.approx(1.0, rel=1e-14)

    def test_agreement_with_independent_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(60):
            d = random_discrete(rng, float(rng.uniform(0.5, 2.0)))
            n = int(rng.integers(1, 7))
            k = int(rng.integers(1, n + 1))
            alpha = float(rng.uniform(0.3, 3.0))
            iid = exact_moment_iid_discrete(d, k, n, alpha)
            indep = exact_moment_indep_discrete([d] * n, k, alpha)
            assert indep == pytest.approx(iid, rel=1e-11, abs=1e-300)


class TestExactMomentIndep:
    def test_shared_atom_product(self):
        comps = [
            DiscreteDistribution(((0.0, 0.8), (10.0, 0.2))),
            DiscreteDistribution(((0.0, 0.7), (10.0, 0.3))),
        ]
        assert exact_moment_indep_discrete(comps, 1, 2.0) == pytest.approx(
            6.0, rel=1e-14
        )

    def test_minimum_config_value(self):
        comps = [
            DiscreteDistribution(((0.0, 0.5), (2.0, 0.5))),
            DiscreteDistribution(((2.0, 1.0),)),
        ]
        assert exact_moment_indep_discrete(comps, 1, 1.5) == pytest.approx(
            math.sqrt(2), rel=1e-14
        )

    def test_single_component_is_plain_moment(self):
        d = DiscreteDistribution(((0.5, 0.25), (1.0, 0.5), (4.0, 0.25)))
        assert exact_moment_indep_discrete([d], 1, 1.3) == pytest.approx(
            d.power_moment(1.3), rel=1e-14
        )

    def test_rank_bounds_checked(self):
        d = DiscreteDistribution(((1.0, 1.0),))
        with pytest.raises(DomainError):
            exact_moment_indep_discrete([d, d], 3, 1.0)


class TestMomentFromQuantile:
    def test_degenerate_callable(self):
        assert moment_from_quantile(lambda u: 2.0, 2, 4, 1.5) == pytest.approx(
            2.0**1.5, rel=1e-9
        )

    def test_power_quantile_closed_value(self):
        assert moment_from_quantile(lambda u: 3 * u**2, 2, 2, 0.5) == pytest.approx(
            2 / math.sqrt(3), rel=1e-9
        )

    def test_extremal_reproduces_low_constant(self):
        q = quantile_extremal_low(2, 3, 0.5, 1.0)
        assert moment_from_quantile(q, 2, 3, 0.5) == pytest.approx(
            constant_A_low(2, 3, 0.5), rel=1e-9
        )

    def test_step_quantile_exact_path(self):
        tp = TwoPoint(0.25, 2.0)
        via_steps = moment_from_quantile(tp, 2, 3, 2.0)
        via_atoms = exact_moment_iid_discrete(
            DiscreteDistribution.from_extremal(tp), 2, 3, 2.0
        )
        assert via_steps == pytest.approx(via_atoms, rel=1e-14)

    def test_matches_scipy_quadrature(self):
        q = quantile_extremal_low(3, 5, 0.25, 1.0)
        from orderstat_bounds import OrderStatParams, order_pdf

        params = OrderStatParams(3, 5)
        ref, _ = scipy.integrate.quad(
            lambda u: order_pdf(params, u) * float(q.quantile(u)) ** 0.25,
            0.0,
            1.0,
            points=[q.rho_gcm],
            epsabs=1e-13,
            epsrel=1e-12,
        )
        assert moment_from_quantile(q, 3, 5, 0.25) == pytest.approx(ref, rel=1e-9)


class TestMonteCarlo:
    def test_degenerate_has_zero_stderr(self):
        est = mc_estimate_moment([Degenerate(2.0)] * 3, 2, 2.0, 10**3, seed=0)
        assert est.mean == pytest.approx(4.0)
        assert est.stderr == 0.0

    def test_same_seed_same_estimate(self):
        tp = TwoPoint(1 / 6, 1.2)
        a = mc_estimate_moment([tp] * 5, 2, 2.0, 5000, seed=9)
        b = mc_estimate_moment([tp] * 5, 2, 2.0, 5000, seed=9)
        assert a == b

    def test_within_clt_band_of_exact(self):
        tp = TwoPoint(1 / 6, 1.2)
        est = mc_estimate_moment([tp] * 5, 2, 2.0, 10**5, seed=31)
        assert abs(est.mean - 125 / 108) <= 4 * est.stderr

    def test_trial_floor(self):
        with pytest.raises(DomainError):
            mc_estimate_moment([Degenerate(1.0)], 1, 1.0, 10, seed=0)


class TestSharpnessSearch:
    def test_grid_argmax_matches_root(self):
        for k, n, alpha in [(2, 5, 2.0), (2, 3, 1.0)]:
            rho_star, value_star = sharpness_search_two_point(k, n, alpha, 1.0, 2000)
            assert abs(rho_star - solve_rho(k, n, alpha)) <= 1 / 2000
            bound = bound_moment(
                MomentQuery(SampleModel.IID, n, k, alpha, (1.0,))
            ).bound
            assert value_star <= bound * (1 + 1e-12)

    def test_grid_floor(self):
        with pytest.raises(DomainError):
            sharpness_search_two_point(2, 5, 2.0, 1.0, 50)


class TestStepPowerInequality:
    def test_constant_function_is_equality(self):
        g = StepFunction((0.0, 1.0), (0.7,))
        lhs, rhs = step_power_inequality(g, 2.3)
        assert lhs == pytest.approx(rhs, rel=1e-14)

    def test_single_jump_is_equality(self):
        theta, t0 = 1.4, 0.35
        g = StepFunction((0.0, t0, 1.0), (0.0, theta))
        lhs, rhs = step_power_inequality(g, 2.0)
        assert lhs == pytest.approx((theta * (1 - t0)) ** 2.0, rel=1e-13)
        assert rhs == pytest.approx(lhs, rel=1e-13)

    def test_worked_case(self):
        g = StepFunction((0.0, 0.5, 1.0), (1.0, 1.0))
        lhs, rhs = step_power_inequality(g, 2.0)
        assert lhs == pytest.approx(1.75, rel=1e-14)
        assert rhs == pytest.approx(2.25, rel=1e-14)

    def test_sides_match_quadrature(self):
        g = StepFunction((0.0, 0.2, 0.6, 1.0), (0.5, 1.0, 0.25))
        alpha = 2.7
        lhs, rhs = step_power_inequality(g, alpha)
        ref, _ = scipy.integrate.quad(
            lambda t: alpha * (1 - t) ** (alpha - 1) * g.value(t) ** alpha,
            0.0,
            1.0,
            points=[0.2, 0.6],
            epsabs=1e-13,
        )
        assert lhs == pytest.approx(ref, rel=1e-10)
        assert rhs == pytest.approx(g.integral() ** alpha, rel=1e-14)

    def test_alpha_left_of_one_rejected(self):
        g = StepFunction((0.0, 1.0), (1.0,))
        with pytest.raises(DomainError):
            step_power_inequality(g, 1.0)

    @settings(max_examples=300, deadline=None)
    @given(
        st.lists(st.floats(min_value=0.01, max_value=0.99), min_size=0, max_size=4),
        st.lists(st.floats(min_value=0.0, max_value=5.0), min_size=1, max_size=5),
        st.sampled_from([1.1, 2.0, 3.5]),
    )
    def test_lhs_never_exceeds_rhs(self, interior, deltas, alpha):
        interior = sorted(set(interior))
        pieces = min(len(deltas), len(interior) + 1)
        g = StepFunction(
            (0.0, *interior[: pieces - 1], 1.0), tuple(deltas[:pieces])
        )
        lhs, rhs = step_power_inequality(g, alpha)
        assert lhs <= rhs * (1 + 1e-12) + 1e-300


class TestSurvivalPowerFunctional:
    def test_zero_atom_two_point_is_equality(self):
        d = DiscreteDistribution(((0.0, 0.25), (2.0, 0.75)))
        for alpha in (1.5, 2.0, 2.7):
            assert survival_power_functional(d, alpha) == pytest.approx(
                d.mean**alpha, rel=1e-13
            )

    def test_never_exceeds_mean_power(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            d = random_discrete(rng, float(rng.uniform(0.3, 3.0)))
            for alpha in (1.5, 2.0, 2.7):
                assert survival_power_functional(d, alpha) <= d.mean**alpha * (
                    1 + 1e-12
                )


class TestPartialPowerMoment:
    def test_matches_closed_form_for_pareto_like_tail(self):
        # sf(x) = min(1, 1/x^3): alpha * int x^(alpha-1) sf dx over [1, T]
        alpha = 1.5
        value = partial_power_moment(lambda x: min(1.0, x**-3.0), alpha, 1.0, 100.0)
        closed = alpha / (3.0 - alpha) * (1.0 - 100.0 ** (alpha - 3.0))
        assert value == pytest.approx(closed, rel=1e-9)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            partial_power_moment(lambda x: 1.0, 1.0, 1.0, 1.0)


class TestSweeps:
    def test_validity_sweep_small(self):
        result = sweep_bound_validity(cases=60, seed=2)
        assert result.ok
        assert result.worst_slack <= 1e-12

    def test_survival_sweep_small(self):
        assert sweep_survival_power(cases=60, seed=2).ok

    def test_step_sweep_small(self):
        assert sweep_step_inequality(cases=400, seed=2).ok

    def test_min_sweep_small(self):
        assert sweep_min_vs_root_moment(cases=60, seed=2).ok

    def test_generators_are_seeded(self):
        a = random_discrete(np.random.default_rng(3), 1.0)
        b = random_discrete(np.random.default_rng(3), 1.0)
        assert a == b
        sa = random_step_function(np.random.default_rng(3))
        sb = random_step_function(np.random.default_rng(3))
        assert sa == sb
