"""Tests for Γ, ₂F₁ at unit argument, I_s and ‖cos‖_s."""

import math

import pytest
from scipy import special

from poisson_lebesgue.errors import DivergenceError, DomainError
from poisson_lebesgue.params import INF
from poisson_lebesgue.specfun import (
    cos_norm,
    cos_norm_closed_form,
    gamma,
    gauss_2f1_series,
    gauss_2f1_unit,
    i_s,
    i_s_limit,
    log_gamma,
    pochhammer,
    theorem_main_F,
)


def _series_grid():
    pairs = [(0.5, 0.5), (0.25, 0.1), (-0.3, 0.4), (1.2, -0.7)]
    sigmas = [0.6, 1.0, 1.7, 2.5, 3.0]
    return [(a, b, a + b + s) for a, b in pairs for s in sigmas]


class TestGamma:
    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 25.5, 120.0])
    def test_matches_scipy(self, x):
        assert gamma(x) == pytest.approx(special.gamma(x), rel=1e-12)

    @pytest.mark.parametrize("x", [-0.5, -1.5, -2.25])
    def test_negative_arguments(self, x):
        assert gamma(x) == pytest.approx(special.gamma(x), rel=1e-12)

    def test_half(self):
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -3.0])
    def test_poles(self, x):
        with pytest.raises(DomainError):
            gamma(x)

    @pytest.mark.parametrize("x", [0.1, 5.0, 50.0, 200.0])
    def test_log_gamma(self, x):
        assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-12)


class TestPochhammer:
    def test_value(self):
        assert pochhammer(0.5, 3) == pytest.approx(1.875)

    def test_empty_product(self):
        assert pochhammer(7.3, 0) == 1.0

    def test_rejects_negative_k(self):
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)


class TestGauss2F1:
    def test_known_value(self):
        assert gauss_2f1_unit(0.5, 0.5, 1.5) == pytest.approx(math.pi / 2.0, abs=1e-10)

    def test_series_known_value(self):
        assert gauss_2f1_series(0.5, 0.5, 1.5) == pytest.approx(math.pi / 2.0, rel=1e-8)

    @pytest.mark.parametrize("a,b,c", _series_grid())
    def test_series_agrees_with_gamma_formula(self, a, b, c):
        assert gauss_2f1_series(a, b, c) == pytest.approx(gauss_2f1_unit(a, b, c), rel=1e-8)

    def test_terminating_series(self):
        # F(−2, b; c; 1) = 1 − 2b/c + b(b+1)/(c(c+1))
        b, c = 0.7, 2.3
        expected = 1.0 - 2.0 * b / c + b * (b + 1.0) / (c * (c + 1.0))
        assert gauss_2f1_series(-2.0, b, c) == pytest.approx(expected, rel=1e-14)

    def test_divergent(self):
        with pytest.raises(DivergenceError):
            gauss_2f1_unit(1.0, 1.0, 2.0)
        with pytest.raises(DivergenceError):
            gauss_2f1_series(1.0, 1.0, 2.0)

    def test_divergence_is_a_domain_error(self):
        with pytest.raises(DomainError):
            gauss_2f1_unit(1.0, 2.0, 2.5)

    def test_pole_in_c(self):
        with pytest.raises(DomainError):
            gauss_2f1_unit(0.5, 0.5, -1.0)

    def test_main_factor(self):
        assert theorem_main_F(2.0) == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-12)
        assert theorem_main_F(3.0) == pytest.approx(1.0, rel=1e-12)

    def test_main_factor_domain(self):
        with pytest.raises(DomainError):
            theorem_main_F(1.0)
        with pytest.raises(DomainError):
            theorem_main_F(INF)


class TestIs:
    @pytest.mark.parametrize("v", [0.3, 1.0, 7.5, 1e4])
    def test_s2_closed_form(self, v):
        assert i_s(2.0, v) == pytest.approx(math.sqrt(math.atan(v)), rel=1e-9)

    @pytest.mark.parametrize("v", [0.5, 3.0, 200.0])
    def test_s1_closed_form(self, v):
        assert i_s(1.0, v) == pytest.approx(math.asinh(v), rel=1e-9)

    def test_inf(self):
        assert i_s(INF, 10.0) == 1.0

    def test_zero_upper_limit(self):
        assert i_s(3.0, 0.0) == 0.0

    def test_negative_upper_limit(self):
        with pytest.raises(DomainError):
            i_s(2.0, -1.0)

    def test_approaches_limit(self):
        assert i_s(3.0, 1e4) == pytest.approx(i_s_limit(3.0), rel=1e-8)

    def test_limit_is_gamma_ratio(self):
        s = 2.5
        integral = 0.5 * math.sqrt(math.pi) * gamma((s - 1.0) / 2.0) / gamma(s / 2.0)
        assert i_s_limit(s) == pytest.approx(integral ** (1.0 / s), rel=1e-12)

    def test_increasing(self):
        values = [i_s(1.5, v) for v in (0.1, 1.0, 10.0, 100.0)]
        assert values == sorted(values)


class TestCosNorm:
    @pytest.mark.parametrize("s", [1.0, 1.5, 2.0, 3.0, 4.5])
    def test_quadrature_matches_closed_form(self, s):
        assert cos_norm(s) == pytest.approx(cos_norm_closed_form(s), rel=1e-9)

    def test_known_values(self):
        assert cos_norm(1.0) == pytest.approx(4.0, rel=1e-10)
        assert cos_norm(2.0) == pytest.approx(math.sqrt(math.pi), rel=1e-10)
        assert cos_norm(INF) == 1.0
        assert cos_norm_closed_form(INF) == 1.0
