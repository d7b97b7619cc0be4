import math

import numpy as np
import pytest
from scipy.integrate import quad

from pnglab.special import (
    DomainError,
    Quadrature,
    airy_ai,
    airy_ai_prime,
    airy_tail,
    composite_gauss_legendre,
    gauss_legendre,
    std_normal_cdf,
)

from oracles import AI0, AIP0, airy_ode, airy_series, airy_tail_quad


class TestAiryAi:
    def test_value_at_zero(self):
        # oracle: 3^{-2/3}/Gamma(2/3) and the power series at 0
        assert airy_ai(0.0) == pytest.approx(0.35502805388781723926, abs=1e-15)
        assert airy_ai(0.0) == pytest.approx(AI0, abs=1e-15)

    def test_superexponential_decay(self):
        assert airy_ai(30.0) < 1e-25

    def test_first_zero(self):
        # root of the series/ODE oracle, found by bisection: -2.338107410459767
        assert abs(airy_ai(-2.338107410459767)) < 1e-10

    @pytest.mark.parametrize("x", [-5.5, -2.0, -0.3, 0.0, 1.0, 4.0])
    def test_against_series_oracle(self, x):
        ai, _ = airy_series(x)
        assert airy_ai(x) == pytest.approx(ai, abs=1e-12)

    @pytest.mark.parametrize("x", [-8.0, -3.3, 2.2, 6.5])
    def test_against_ode_oracle(self, x):
        ai, _ = airy_ode(x)
        assert airy_ai(x) == pytest.approx(ai, abs=5e-11)

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            airy_ai(np.inf)
        with pytest.raises(DomainError):
            airy_ai(np.nan)

    def test_vectorized(self):
        x = np.array([-1.0, 0.0, 2.0])
        v = airy_ai(x)
        assert v.shape == (3,)
        assert v[1] == pytest.approx(AI0)

    def test_ode_residual_grid(self):
        # |Ai'' - x Ai| with Ai'' from central differences of airy_ai_prime
        h = 1e-5
        for x in np.arange(-10.0, 5.1, 1.0):
            app = (airy_ai_prime(x + h) - airy_ai_prime(x - h)) / (2 * h)
            assert abs(app - x * airy_ai(x)) < 1e-8


class TestAiryAiPrime:
    def test_value_at_zero(self):
        assert airy_ai_prime(0.0) == pytest.approx(-0.25881940379280679841, abs=1e-15)
        assert airy_ai_prime(0.0) == pytest.approx(AIP0, abs=1e-15)

    def test_decay(self):
        assert abs(airy_ai_prime(30.0)) < 1e-24

    def test_finite_difference_consistency(self):
        h = 1e-6
        fd = (airy_ai(1.0 + h) - airy_ai(1.0 - h)) / (2 * h)
        assert airy_ai_prime(1.0) == pytest.approx(fd, abs=1e-9)

    @pytest.mark.parametrize("x", [-4.0, -1.0, 0.5, 3.0])
    def test_against_series_oracle(self, x):
        _, aip = airy_series(x)
        assert airy_ai_prime(x) == pytest.approx(aip, abs=1e-12)


class TestAiryTail:
    def test_value_at_zero(self):
        # classical identity int_0^inf Ai = 1/3, confirmed by quadrature oracle
        assert airy_tail(0.0) == pytest.approx(1.0 / 3.0, abs=1e-10)
        assert airy_tail(0.0) == pytest.approx(airy_tail_quad(0.0), abs=1e-10)

    def test_far_left_normalization(self):
        # total mass is 1; at y = -30 the oscillatory envelope ~ |y|^{-3/4}/sqrt(pi)
        v = airy_tail(-30.0)
        envelope = 30.0 ** (-0.75) / math.sqrt(math.pi)
        assert abs(v - 1.0) < envelope + 1e-3
        assert v == pytest.approx(airy_tail_quad(-30.0), abs=1e-9)

    def test_decay(self):
        assert airy_tail(30.0) < 1e-25

    @pytest.mark.parametrize("y", [-12.3, -4.0, -0.7, 1.1, 5.0])
    def test_against_adaptive_quadrature(self, y):
        assert airy_tail(y) == pytest.approx(airy_tail_quad(y), abs=1e-10)

    def test_derivative_is_minus_ai(self):
        h = 1e-4
        for y in (-3.0, 0.4, 2.0):
            fd = (airy_tail(y + h) - airy_tail(y - h)) / (2 * h)
            assert fd == pytest.approx(-airy_ai(y), abs=1e-7)

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            airy_tail(np.nan)


class TestGaussLegendre:
    def test_two_point_rule(self):
        rule = gauss_legendre(2, -1.0, 1.0)
        assert rule.nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)])
        assert rule.weights == pytest.approx([1.0, 1.0])

    def test_cubic_exactness(self):
        rule = gauss_legendre(2, 0.0, 1.0)
        assert rule.integrate(lambda x: x**3) == pytest.approx(0.25, abs=1e-15)

    def test_exponential(self):
        rule = gauss_legendre(20, -1.0, 1.0)
        assert rule.integrate(np.exp) == pytest.approx(2.0 * math.sinh(1.0), abs=1e-14)

    def test_weight_sum(self):
        for n, a, b in [(5, -2.0, 3.0), (48, 0.0, 14.0)]:
            rule = gauss_legendre(n, a, b)
            assert np.sum(rule.weights) == pytest.approx(b - a, abs=1e-13)

    def test_refinement_stability(self):
        f = lambda x: np.exp(-(x**2)) * np.cos(x)
        v1 = composite_gauss_legendre(24, np.linspace(-6, 6, 7)).integrate(f)
        v2 = composite_gauss_legendre(48, np.linspace(-6, 6, 13)).integrate(f)
        assert abs(v1 - v2) < 1e-12

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            gauss_legendre(0, 0.0, 1.0)
        with pytest.raises(ValueError):
            gauss_legendre(4, 1.0, 1.0)

    def test_quadrature_invariants(self):
        rule = gauss_legendre(7, -1.0, 2.0)
        assert rule.nodes.shape == rule.weights.shape
        assert np.all(rule.weights > 0)
        with pytest.raises(ValueError):
            Quadrature(np.array([0.0]), np.array([1.0, 2.0]), ("interval", 0, 1))


class TestStdNormalCdf:
    def test_symmetry_point(self):
        assert std_normal_cdf(0.0) == pytest.approx(0.5, abs=1e-16)

    def test_normalization(self):
        assert std_normal_cdf(40.0) == 1.0

    def test_one_sigma(self):
        # erf-series oracle value
        want = 0.5 * (1.0 + math.erf(1.0 / math.sqrt(2.0)))
        assert std_normal_cdf(1.0) == pytest.approx(0.841344746068543, abs=1e-14)
        assert std_normal_cdf(1.0) == pytest.approx(want, abs=1e-16)

    def test_against_quadrature(self):
        v = quad(lambda t: math.exp(-t * t / 2.0) / math.sqrt(2 * math.pi), -12, 0.7)[0]
        assert std_normal_cdf(0.7) == pytest.approx(v, abs=1e-12)

    def test_monotone(self):
        grid = np.linspace(-6, 6, 101)
        assert np.all(np.diff(std_normal_cdf(grid)) >= 0)
