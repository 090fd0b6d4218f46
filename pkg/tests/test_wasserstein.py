import math
import random
from fractions import Fraction

import pytest

from wassercop import (
    Comonotone,
    Empirical,
    EmpiricalCopula,
    Method,
    PointMass,
    Uniform,
    w1_cdf,
    wp_lower_bound_nd,
    wp_quantile,
    wp_shared_nd,
    wp_via_M,
    wpq_bounds,
)

HALF = Fraction(1, 2)
F_RUN = Empirical([(0, HALF), (1, HALF)])
G_RUN = Empirical([(0, "0.25"), (2, "0.75")])


def random_empirical(rng, max_atoms=10):
    n = rng.randint(1, max_atoms)
    return Empirical(
        [(round(rng.uniform(-5, 5), 6), rng.randint(1, 9)) for _ in range(n)]
    )


class TestW1Cdf:
    def test_identical(self):
        assert w1_cdf(F_RUN, F_RUN).value == 0.0

    def test_point_masses(self):
        r = w1_cdf(PointMass(0), PointMass(3))
        assert r.value == pytest.approx(3.0)

    def test_running_example(self):
        r = w1_cdf(F_RUN, G_RUN)
        assert r.value == pytest.approx(1.0, abs=1e-12)
        assert r.method is Method.CDF_INTEGRAL
        assert r.error_estimate == 0.0

    def test_parametric_route(self):
        r = w1_cdf(Uniform(0, 1), Uniform(0, 2))
        # quantiles u and 2u: integral of u over (0,1)
        assert r.value == pytest.approx(0.5, abs=1e-8)


class TestWpQuantile:
    def test_identical(self):
        for p in (1, 2, 3):
            assert wp_quantile(F_RUN, F_RUN, p).value == 0.0

    def test_point_masses(self):
        d = Empirical([(1.5, 1)])
        e = Empirical([(-2, 1)])
        for p in (1, 2, 3.5):
            assert wp_quantile(d, e, p).value == pytest.approx(3.5)

    def test_running_example_p2(self):
        r = wp_quantile(F_RUN, G_RUN, 2)
        assert r.power_value == pytest.approx(1.5, abs=1e-12)
        assert r.value == pytest.approx(math.sqrt(1.5), abs=1e-12)

    def test_order_below_one_rejected(self):
        with pytest.raises(ValueError):
            wp_quantile(F_RUN, G_RUN, 0.9)


class TestWpViaM:
    def test_identical(self):
        assert wp_via_M(F_RUN, F_RUN, 1).value == 0.0

    def test_running_example_p1(self):
        assert wp_via_M(F_RUN, G_RUN, 1).power_value == pytest.approx(1.0, abs=1e-12)

    def test_uniform_scaling_p2(self):
        r = wp_via_M(Uniform(0, 1), Uniform(0, 2), 2)
        assert r.power_value == pytest.approx(1.0 / 3.0, abs=1e-8)

    def test_agrees_with_quantile_route(self):
        rng = random.Random(21)
        for _ in range(150):
            F, G = random_empirical(rng), random_empirical(rng)
            for p in (1, 2, 3):
                a = wp_via_M(F, G, p).power_value
                b = wp_quantile(F, G, p).power_value
                assert abs(a - b) <= 1e-10
        q1 = wp_quantile(F, G, 1).power_value
        assert abs(w1_cdf(F, G).power_value - q1) <= 1e-10


class TestWpSharedNd:
    def test_identical_margins(self):
        r = wp_shared_nd(Comonotone(2), (F_RUN, G_RUN), (F_RUN, G_RUN), 2)
        assert r.value == 0.0
        assert r.method is Method.SHARED_COPULA_SUM

    def test_point_masses(self):
        a = (PointMass(0), PointMass(0))
        b = (PointMass(1), PointMass(2))
        assert wp_shared_nd(Comonotone(2), a, b, 2).power_value == pytest.approx(5.0)

    def test_uniform_margins_empirical_copula(self):
        C = EmpiricalCopula([(0.25, 0.25), (0.75, 0.75)])
        r = wp_shared_nd(
            C, (Uniform(0, 1), Uniform(0, 1)), (Uniform(0, 2), Uniform(0, 2)), 2
        )
        assert r.power_value == pytest.approx(2.0 / 3.0, abs=1e-8)
        assert r.copula is not None

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            wp_shared_nd(Comonotone(3), (F_RUN, G_RUN), (F_RUN, G_RUN), 2)


class TestWpqBounds:
    def test_single_coordinate_collapses(self):
        r = wpq_bounds(None, (F_RUN,), (G_RUN,), 2, 1)
        lo, hi = r.bounds
        assert lo == hi == r.power_value

    def test_q_below_p(self):
        C = Comonotone(2)
        r = wpq_bounds(C, (F_RUN, F_RUN), (G_RUN, F_RUN), 2, 1)
        assert r.power_value == pytest.approx(1.5, abs=1e-12)
        assert r.bounds == pytest.approx((1.5, 3.0), abs=1e-12)

    def test_p_below_q(self):
        C = Comonotone(2)
        r = wpq_bounds(C, (F_RUN, F_RUN), (G_RUN, F_RUN), 1, 2)
        assert r.power_value == pytest.approx(1.0, abs=1e-12)
        assert r.bounds == pytest.approx((2 ** -0.5, 1.0), abs=1e-12)

    def test_equal_orders_rejected(self):
        with pytest.raises(ValueError):
            wpq_bounds(Comonotone(2), (F_RUN, F_RUN), (G_RUN, G_RUN), 2, 2)


class TestLowerBoundNd:
    def test_identical_margins(self):
        assert wp_lower_bound_nd((F_RUN, G_RUN), (F_RUN, G_RUN), 2) == 0.0

    def test_point_masses(self):
        a = (PointMass(0), PointMass(0))
        b = (PointMass(1), PointMass(2))
        assert wp_lower_bound_nd(a, b, 3) == pytest.approx(1 + 8)

    def test_matches_shared_value(self):
        C = EmpiricalCopula([(0.25, 0.25), (0.75, 0.75)])
        margins_f = (Uniform(0, 1), Uniform(0, 1))
        margins_g = (Uniform(0, 2), Uniform(0, 2))
        assert wp_lower_bound_nd(margins_f, margins_g, 2) == pytest.approx(
            wp_shared_nd(C, margins_f, margins_g, 2).power_value
        )


class TestMetricAxioms:
    def test_axioms_on_random_triples(self):
        rng = random.Random(31)
        for _ in range(200):
            mu, nu, rho = (random_empirical(rng) for _ in range(3))
            for p in (1, 2):
                assert wp_quantile(mu, mu, p).value == 0.0
                ab = wp_quantile(mu, nu, p).value
                assert abs(ab - wp_quantile(nu, mu, p).value) <= 1e-12
                assert ab <= wp_quantile(mu, rho, p).value + wp_quantile(rho, nu, p).value + 1e-10

    def test_zero_iff_equal_in_law(self):
        a = Empirical([(0, 1), (2, 1)])
        b = Empirical([(0, "0.5"), (2, "0.5")])
        c = Empirical([(0, "0.4"), (2, "0.6")])
        assert wp_quantile(a, b, 2).value == 0.0
        assert wp_quantile(a, c, 2).value > 0.0


def test_scale_equivariance():
    rng = random.Random(37)
    for _ in range(50):
        F = random_empirical(rng)
        G = random_empirical(rng)
        a, b = rng.uniform(-3, 3) or 1.0, rng.uniform(-5, 5)
        Fs = Empirical([(a * x + b, w) for x, w in zip(F.locations, F.weights)])
        Gs = Empirical([(a * x + b, w) for x, w in zip(G.locations, G.weights)])
        for p in (1, 2):
            base = wp_quantile(F, G, p).value
            scaled = wp_quantile(Fs, Gs, p).value
            assert abs(scaled - abs(a) * base) <= 1e-12 * max(1.0, abs(a) * base)


def test_report_value_is_root_of_power():
    r = wp_quantile(F_RUN, G_RUN, 3)
    assert r.value == pytest.approx(r.power_value ** (1 / 3), abs=1e-12)
