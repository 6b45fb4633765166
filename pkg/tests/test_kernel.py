import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from orderstat_bounds import (
    DomainError,
    OrderStatParams,
    elementary_symmetric,
    order_cdf,
    order_pdf,
    order_sf,
    regularized_incomplete_beta,
)
from orderstat_bounds.numerics import adaptive_quad


class TestOrderCdf:
    def test_square_law_for_maximum_of_two(self):
        assert order_cdf(OrderStatParams(2, 2), 0.5) == pytest.approx(0.25, abs=1e-15)

    def test_left_endpoint(self):
        assert order_cdf(OrderStatParams(1, 3), 0.0) == 0.0

    def test_binomial_tail_enumeration(self):
        # P(Bin(5, 1/6) >= 2) by direct enumeration
        p = 1 / 6
        expected = sum(
            math.comb(5, j) * p**j * (1 - p) ** (5 - j) for j in range(2, 6)
        )
        assert expected == pytest.approx(763 / 3888)
        assert order_cdf(OrderStatParams(2, 5), p) == pytest.approx(expected, abs=1e-15)

    def test_right_endpoint(self):
        assert order_cdf(OrderStatParams(4, 7), 1.0) == 1.0

    def test_monotone_on_grid(self):
        grid = np.linspace(0.0, 1.0, 1000)
        for k, n in [(1, 1), (2, 5), (3, 7), (7, 7), (1, 10)]:
            params = OrderStatParams(k, n)
            values = [order_cdf(params, float(x)) for x in grid]
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_cdf_plus_sf_is_one(self):
        for k, n in [(2, 5), (4, 9), (1, 6), (6, 6)]:
            params = OrderStatParams(k, n)
            for x in np.linspace(0.0, 1.0, 41):
                assert order_cdf(params, float(x)) + order_sf(params, float(x)) == pytest.approx(
                    1.0, abs=1e-13
                )

    def test_matches_incomplete_beta_for_integer_parameters(self):
        grid = np.linspace(0.0, 1.0, 23)
        for n in range(1, 31):
            for k in range(1, n + 1):
                params = OrderStatParams(k, n)
                for x in grid:
                    direct = order_cdf(params, float(x))
                    via_beta = regularized_incomplete_beta(k, n + 1 - k, float(x))
                    assert direct == pytest.approx(via_beta, abs=1e-13, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            order_cdf(OrderStatParams(2, 4), -0.1)
        with pytest.raises(DomainError):
            order_cdf(OrderStatParams(2, 4), 1.1)
        with pytest.raises(DomainError):
            OrderStatParams(0, 4)
        with pytest.raises(DomainError):
            OrderStatParams(5, 4)

    def test_large_n_falls_back_to_continued_fraction(self):
        params = OrderStatParams(3, 1200)
        for x in (0.001, 0.0025, 0.01):
            ref = float(sc.betainc(3, 1198, x))
            assert order_cdf(params, x) == pytest.approx(ref, rel=1e-11)
            assert order_sf(params, x) == pytest.approx(1 - ref, rel=1e-11)


class TestOrderPdf:
    def test_spot_values(self):
        assert order_pdf(OrderStatParams(2, 3), 0.25) == pytest.approx(9 / 8, rel=1e-14)
        assert order_pdf(OrderStatParams(1, 1), 0.7) == pytest.approx(1.0, rel=1e-14)
        assert order_pdf(OrderStatParams(3, 3), 0.5) == pytest.approx(0.75, rel=1e-14)

    def test_integrates_to_one(self):
        for k, n in [(2, 5), (3, 4), (1, 6), (6, 6)]:
            params = OrderStatParams(k, n)
            total = adaptive_quad(
                lambda x: order_pdf(params, x) if 0 < x < 1 else 0.0,
                0.0,
                1.0,
                rel_tol=1e-12,
            )
            assert total == pytest.approx(1.0, abs=1e-10)

    def test_is_derivative_of_cdf(self):
        h = 1e-6
        for k, n in [(2, 5), (4, 6)]:
            params = OrderStatParams(k, n)
            for x in np.linspace(0.05, 0.95, 19):
                numeric = (order_cdf(params, x + h) - order_cdf(params, x - h)) / (2 * h)
                assert order_pdf(params, float(x)) == pytest.approx(numeric, abs=1e-6)

    def test_endpoints_rejected(self):
        with pytest.raises(DomainError):
            order_pdf(OrderStatParams(2, 4), 0.0)
        with pytest.raises(DomainError):
            order_pdf(OrderStatParams(2, 4), 1.0)


class TestRegularizedIncompleteBeta:
    def test_uniform_case(self):
        assert regularized_incomplete_beta(1, 1, 0.3) == pytest.approx(0.3, rel=1e-14)

    def test_matches_binomial_identity(self):
        assert regularized_incomplete_beta(2, 4, 1 / 6) == pytest.approx(
            763 / 3888, rel=1e-12
        )

    def test_symmetric_midpoint(self):
        assert regularized_incomplete_beta(2.5, 2.5, 0.5) == pytest.approx(0.5, rel=1e-13)

    def test_against_scipy(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            a = float(rng.uniform(0.1, 50.0))
            b = float(rng.uniform(0.1, 50.0))
            x = float(rng.random())
            ours = regularized_incomplete_beta(a, b, x)
            ref = float(sc.betainc(a, b, x))
            assert ours == pytest.approx(ref, rel=1e-12, abs=1e-300)

    @settings(max_examples=200, deadline=None)
    @given(
        st.floats(min_value=0.2, max_value=30.0),
        st.floats(min_value=0.2, max_value=30.0),
        # keep x where 1-x is representable to full precision; closer to the
        # endpoints the float rounding of 1-x itself dominates the identity
        st.floats(min_value=0.01, max_value=0.99),
    )
    def test_reflection_symmetry(self, a, b, x):
        lhs = regularized_incomplete_beta(a, b, x)
        rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x)
        assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_reflection_at_endpoints(self):
        for a, b in [(0.5, 1.0), (3.0, 7.0)]:
            assert regularized_incomplete_beta(a, b, 0.0) == 0.0
            assert regularized_incomplete_beta(a, b, 1.0) == 1.0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            regularized_incomplete_beta(0.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            regularized_incomplete_beta(1.0, -2.0, 0.5)
        with pytest.raises(DomainError):
            regularized_incomplete_beta(1.0, 1.0, 1.5)


class TestElementarySymmetric:
    def test_small_integer_inputs_exact(self):
        assert elementary_symmetric((1.0, 2.0, 3.0), 2) == 11.0
        assert elementary_symmetric((2.0, 3.0), 2) == 6.0
        assert elementary_symmetric((1.0, 2.0, 3.0, 4.0), 1) == 10.0

    def test_out_of_range_order(self):
        with pytest.raises(DomainError):
            elementary_symmetric((1.0, 2.0), 3)
        with pytest.raises(DomainError):
            elementary_symmetric((1.0, 2.0), 0)
        with pytest.raises(DomainError):
            elementary_symmetric((1.0, -2.0), 1)

    @settings(max_examples=150, deadline=None)
    @given(
        st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=2, max_size=7),
        st.randoms(use_true_random=False),
    )
    def test_permutation_invariance(self, mus, rand):
        m = rand.randint(1, len(mus))
        shuffled = list(mus)
        rand.shuffle(shuffled)
        a = elementary_symmetric(tuple(mus), m)
        b = elementary_symmetric(tuple(shuffled), m)
        assert b == pytest.approx(a, rel=1e-12)

    @settings(max_examples=150, deadline=None)
    @given(
        st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=2, max_size=6),
        st.floats(min_value=0.1, max_value=5.0),
    )
    def test_homogeneity(self, mus, c):
        m = len(mus) - 1
        scaled = tuple(c * x for x in mus)
        assert elementary_symmetric(scaled, m) == pytest.approx(
            c**m * elementary_symmetric(tuple(mus), m), rel=1e-12
        )
