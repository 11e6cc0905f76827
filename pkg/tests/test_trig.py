"""Tests for trigonometric polynomials, FFT transforms, norms and convolution."""

import math

import numpy as np
import pytest

from poisson_lebesgue.errors import AliasingError, ContractError, DomainError
from poisson_lebesgue.kernel import make_kernel_spec
from poisson_lebesgue.params import INF, ClassParams
from poisson_lebesgue.trig import (
    GridFunction,
    ScaledPoly,
    TrigPoly,
    analyze,
    antiderivative,
    convolve,
    convolve_kernel,
    deviation,
    eval_at,
    eval_grid,
    lp_norm,
    next_pow2,
    partial_sum,
    scaled_sup_norm,
    sign_changes,
    sup_norm_certified,
)


class TestTrigPoly:
    def test_cosine_constructor(self):
        f = TrigPoly.cosine(3, 2.0)
        assert f.degree == 3
        assert f.cos_coeffs.tolist() == [0.0, 0.0, 2.0]
        assert TrigPoly.cosine(0, 1.5).a0 == 3.0

    def test_coefficients_are_read_only(self):
        f = TrigPoly.cosine(2)
        with pytest.raises(ValueError):
            f.cos_coeffs[0] = 1.0

    def test_mismatched_lengths(self):
        with pytest.raises(DomainError):
            TrigPoly(0.0, [1.0, 2.0], [1.0])

    def test_effective_degree(self):
        f = TrigPoly(0.0, [1.0, 0.0, 0.0], [0.0, 0.5, 0.0])
        assert f.degree == 3
        assert f.effective_degree == 2
        assert TrigPoly(4.0, [], []).effective_degree == 0

    def test_arithmetic_pads(self):
        f = TrigPoly.cosine(1) + TrigPoly.sine(3)
        assert f.degree == 3
        g = (f * 2.0 - f) / 1.0
        assert g.max_coeff_diff(f) == 0.0

    def test_dict_round_trip(self, make_poly):
        f = make_poly(9, zero_mean=False)
        g = TrigPoly.from_dict(f.to_dict())
        assert g.max_coeff_diff(f) == 0.0

    def test_shifted(self, make_poly):
        f = make_poly(7)
        xs = np.linspace(0.0, 2.0 * math.pi, 13)
        h = 0.37
        np.testing.assert_allclose(eval_at(f.shifted(h), xs), eval_at(f, xs + h), atol=1e-13)

    def test_zero_mean(self):
        assert TrigPoly.cosine(4).is_zero_mean()
        assert not TrigPoly(0.1, [1.0], [0.0]).is_zero_mean()


class TestGrid:
    def test_constant(self):
        values = eval_grid(TrigPoly(2.0, [], []), 8).values
        np.testing.assert_allclose(values, np.ones(8))

    def test_cosine_samples(self):
        n_points = 16
        values = eval_grid(TrigPoly.cosine(3), n_points).values
        nodes = 2.0 * math.pi * np.arange(n_points) / n_points
        np.testing.assert_allclose(values, np.cos(3.0 * nodes), atol=1e-14)

    def test_matches_direct_evaluation(self, make_poly):
        f = make_poly(20, zero_mean=False)
        g = eval_grid(f, 64)
        np.testing.assert_allclose(g.values, eval_at(f, g.nodes), atol=1e-12)

    def test_round_trip(self, make_poly):
        f = make_poly(8, zero_mean=False)
        back = analyze(eval_grid(f, 32), degree=8)
        assert back.max_coeff_diff(f) <= 1e-12

    def test_aliasing(self):
        with pytest.raises(AliasingError) as excinfo:
            eval_grid(TrigPoly.cosine(8), 16)
        assert excinfo.value.required == 18

    def test_power_of_two_required(self):
        with pytest.raises(DomainError):
            eval_grid(TrigPoly.cosine(2), 24)

    def test_analyze_degree_limit(self):
        with pytest.raises(AliasingError):
            analyze(GridFunction(np.zeros(16)), degree=8)

    def test_next_pow2(self):
        assert next_pow2(1) == 1
        assert next_pow2(17) == 32
        assert next_pow2(64) == 64


class TestCalculus:
    def test_antiderivative_includes_mean(self):
        f = TrigPoly(2.0, [0.0, 1.0], [0.0, 0.0])
        x = np.array([math.pi])
        # ∫_0^π (1 + cos 2t) dt = π
        assert antiderivative(f, x)[0] == pytest.approx(math.pi)

    def test_sign_changes(self):
        f = TrigPoly(0.0, np.array([0.0, 0.0, math.sin(0.3)]), np.array([0.0, 0.0, math.cos(0.3)]))
        # sin(3t + 0.3)
        roots = sign_changes(f)
        expected = np.sort(np.mod((np.arange(6) * math.pi - 0.3) / 3.0, 2.0 * math.pi))
        np.testing.assert_allclose(roots, expected, atol=1e-12)

    @pytest.mark.parametrize("k", [1, 4])
    def test_sign_changes_on_grid_nodes(self, k):
        # every zero of cos(kt) is a node of the bracketing grid
        roots = sign_changes(TrigPoly.cosine(k))
        expected = (np.arange(2 * k) + 0.5) * math.pi / k
        np.testing.assert_allclose(roots, expected, atol=1e-13)

    def test_sign_changes_of_one_signed(self):
        assert sign_changes(TrigPoly(4.0, [1.0], [0.0])).size == 0


class TestProjections:
    def test_partial_sum_and_deviation(self):
        f = TrigPoly(1.0, [1.0, 2.0, 3.0], [0.5, 0.0, -1.0])
        low = partial_sum(f, 3)
        high = deviation(f, 3)
        assert low.degree == 2
        assert (low + high).max_coeff_diff(f) == 0.0
        assert high.a0 == 0.0
        assert high.cos_coeffs.tolist() == [0.0, 0.0, 3.0]

    def test_deviation_of_low_degree_vanishes(self):
        f = TrigPoly(0.0, [1.0, 2.0], [3.0, 4.0])
        assert deviation(f, 3).effective_degree == 0

    def test_deviation_keeps_scale(self):
        sp = ScaledPoly(TrigPoly.cosine(5), -40.0)
        out = deviation(sp, 3)
        assert isinstance(out, ScaledPoly)
        assert out.log_scale == -40.0

    def test_order_must_be_positive(self):
        with pytest.raises(DomainError):
            partial_sum(TrigPoly.cosine(1), 0)


class TestConvolve:
    def test_eigenfunction(self):
        k = 3
        out = convolve(TrigPoly.cosine(k), TrigPoly.cosine(k))
        assert out.max_coeff_diff(TrigPoly.cosine(k, math.pi)) <= 1e-14

    def test_holder_bounds(self, make_poly):
        kernel = make_poly(24)
        phi = make_poly(24)
        out = convolve(kernel, phi)
        sup = sup_norm_certified(out).upper
        assert sup <= lp_norm(kernel, 2.0) * lp_norm(phi, 2.0) * (1.0 + 1e-9)
        assert sup <= sup_norm_certified(kernel).upper * lp_norm(phi, 1.0) * (1.0 + 1e-9)

    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0])
    def test_kernel_eigenrelation(self, beta):
        params = ClassParams(alpha=1.0, r=0.5, beta=beta)
        spec = make_kernel_spec(params, 1)
        theta = beta * math.pi / 2.0
        for k in range(1, 65):
            got = convolve_kernel(TrigPoly.cosine(k), spec).unscaled()
            damp = math.exp(-math.sqrt(k))
            # cos(k(x) − θ) = cos θ cos kx + sin θ sin kx
            expected = TrigPoly.cosine(k, damp * math.cos(theta)) + TrigPoly.sine(
                k, damp * math.sin(theta)
            )
            assert sup_norm_certified(got - expected).upper <= 1e-9

    def test_kernel_on_sine(self):
        params = ClassParams(alpha=1.0, r=0.5, beta=1.0)
        spec = make_kernel_spec(params, 1)
        got = convolve_kernel(TrigPoly.sine(4), spec).unscaled()
        # sin(4x − π/2) = −cos 4x
        expected = TrigPoly.cosine(4, -math.exp(-2.0))
        assert got.max_coeff_diff(expected) <= 1e-14

    def test_low_frequencies_removed(self):
        params = ClassParams(alpha=1.0, r=0.5)
        spec = make_kernel_spec(params, 10)
        phi = TrigPoly(0.0, np.ones(9), np.ones(9))
        assert convolve_kernel(phi, spec).poly.effective_degree == 0

    def test_representation_identity(self, make_poly):
        params = ClassParams(alpha=1.0, r=0.5, beta=0.3)
        n = 64
        full = make_kernel_spec(params, 1)
        truncated = make_kernel_spec(params, n)
        for _ in range(50):
            phi = make_poly(256)
            via_full = deviation(convolve_kernel(phi, full, scale_at=n), n)
            direct = convolve_kernel(phi, truncated)
            assert via_full.log_scale == pytest.approx(direct.log_scale)
            assert via_full.poly.max_coeff_diff(direct.poly) <= 1e-12

    def test_frequencies_below_scale_are_dropped(self):
        params = ClassParams(alpha=1.0, r=0.5)
        spec = make_kernel_spec(params, 1)
        phi = TrigPoly.cosine(3) + TrigPoly.cosine(40) + TrigPoly.cosine(2000)
        out = convolve_kernel(phi, spec, scale_at=1225)
        assert np.all(np.isfinite(out.poly.cos_coeffs))
        assert out.poly.cos_coeffs[2] == 0.0
        assert out.poly.cos_coeffs[39] == 0.0
        assert out.poly.cos_coeffs[1999] == pytest.approx(math.exp(-(math.sqrt(2000) - 35.0)))

    def test_requires_zero_mean(self):
        spec = make_kernel_spec(ClassParams(alpha=1.0, r=0.5), 1)
        with pytest.raises(ContractError):
            convolve_kernel(TrigPoly(1.0, [1.0], [0.0]), spec)

    def test_no_underflow_far_above_threshold(self):
        params = ClassParams(alpha=1.0, r=0.5)
        spec = make_kernel_spec(params, 1)
        out = convolve_kernel(TrigPoly.cosine(1225), spec, scale_at=1225)
        assert out.log_scale == pytest.approx(-35.0)
        assert out.poly.cos_coeffs[-1] == pytest.approx(1.0)


class TestNorms:
    def test_l2_of_cosine(self):
        assert lp_norm(TrigPoly.cosine(1), 2.0) == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_l1_of_constant(self):
        assert lp_norm(TrigPoly(2.0, [], []), 1.0) == pytest.approx(2.0 * math.pi, rel=1e-12)

    def test_l1_of_cosine(self):
        assert lp_norm(TrigPoly.cosine(1), 1.0) == pytest.approx(4.0, rel=1e-13)

    @pytest.mark.parametrize("k,amplitude", [(1, 1.0), (4, 0.25), (7, 2.0)])
    def test_l1_of_cosine_is_exact(self, k, amplitude):
        value = lp_norm(TrigPoly.cosine(k, amplitude), 1.0)
        assert value == pytest.approx(4.0 * amplitude, rel=1e-13)

    def test_sup_of_cosine(self):
        assert lp_norm(TrigPoly.cosine(1), INF) == pytest.approx(1.0, abs=1e-12)

    def test_l3_of_cosine(self):
        expected = (8.0 / 3.0) ** (1.0 / 3.0)
        assert lp_norm(TrigPoly.cosine(1), 3.0, tol=1e-8) == pytest.approx(expected, rel=1e-7)

    def test_parseval_matches_grid(self, make_poly):
        f = make_poly(8, zero_mean=False)
        assert lp_norm(f, 2.0) == pytest.approx(lp_norm(eval_grid(f, 64), 2.0), rel=1e-10)

    def test_l1_matches_fine_trapezoid(self, make_poly):
        f = make_poly(12)
        fine = lp_norm(eval_grid(f, 1 << 16), 1.0)
        assert lp_norm(f, 1.0) == pytest.approx(fine, rel=1e-6)

    def test_grid_function_sup(self):
        assert lp_norm(GridFunction([0.5, -2.0, 1.0]), INF) == 2.0

    def test_homogeneous(self, make_poly):
        f = make_poly(10)
        assert lp_norm(3.0 * f, 1.5, tol=1e-9) == pytest.approx(3.0 * lp_norm(f, 1.5, tol=1e-9), rel=1e-7)


class TestSupCertificate:
    def test_contains_finer_maximum(self, make_poly):
        f = make_poly(32)
        bound = sup_norm_certified(f)
        finer = float(np.max(np.abs(eval_grid(f, 16 * next_pow2(16 * 32)).values)))
        assert bound.value <= finer + 1e-12
        assert finer <= bound.upper + 1e-12

    def test_cosine_radius(self):
        bound = sup_norm_certified(TrigPoly.cosine(5))
        assert bound.value == pytest.approx(1.0)
        assert bound.radius <= 5.0 * math.pi / 80.0

    def test_zero(self):
        bound = sup_norm_certified(TrigPoly.zero(4))
        assert bound == (0.0, 0.0)

    def test_grid_too_coarse(self):
        with pytest.raises(AliasingError):
            sup_norm_certified(TrigPoly.cosine(10), n_points=64)

    def test_scaled(self):
        value, radius = scaled_sup_norm(ScaledPoly(TrigPoly.cosine(2, 3.0), -900.0))
        assert value.log_abs() == pytest.approx(math.log(3.0) - 900.0)
        assert radius.log_abs() < value.log_abs()
