import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_lowpass.filter_kernels import (DivergentSeriesError, convolve, first_order_kernel,
                                            kernel_series, kernel_table, multiplier,
                                            order_n_kernel)
from fourier_lowpass.fourier_core import (Convergence, classify_convergence,
                                          coefficients_from_samples, evaluate, sample_function)


def test_first_order_values():
    k = first_order_kernel(0.5)
    assert k(0.0) == 1.0
    assert k(0.5) == 0.5
    assert k(-0.5) == 0.5
    assert k(0.7) == 0.0
    assert k.jump_values[Fraction(1, 2)] == Fraction(1, 2)


def test_first_order_rejects_nonpositive():
    for eps in (0.0, -1.0):
        with pytest.raises(ValueError):
            first_order_kernel(eps)


def test_convolve_half_ranges_gives_triangle():
    k = convolve(first_order_kernel(0.5), first_order_kernel(0.5))
    assert k.order == 2 and k.support == (-1.0, 1.0)
    u = np.linspace(-1, 1, 41)
    np.testing.assert_allclose(k(u), 1 - np.abs(u), atol=1e-15)


def test_convolve_full_ranges_apex():
    k = convolve(first_order_kernel(0.5), first_order_kernel(0.5))
    assert k(0.0) == 1.0
    k2 = convolve(first_order_kernel(1.0), first_order_kernel(1.0))
    assert k2.support == (-2.0, 2.0)
    assert k2(0.0) == 0.5


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(0.05, 2.0))
def test_convolution_unit_integral(a, b):
    k = convolve(first_order_kernel(a), first_order_kernel(b))
    assert k.integral() == 1
    assert k.is_even()


def test_order_one_matches_first_order():
    a, b = order_n_kernel(1, 0.5), first_order_kernel(0.5)
    u = np.linspace(-0.7, 0.7, 29)
    np.testing.assert_array_equal(a(u), b(u))


def test_order_two_is_triangle():
    k = order_n_kernel(2, 1.0)
    assert k(0.0) == 1.0
    assert k(1.0) == 0.0


def test_order_three_against_numerical_convolution():
    eps = 0.6
    k = order_n_kernel(3, eps)
    assert k.support == pytest.approx((-0.6, 0.6))
    assert k.is_even()
    assert k.integral() == 1
    # oracle: discrete convolution of three boxes of width 2*eps/3
    h = 1e-5
    box = np.ones(int(round(2 * eps / 3 / h)) + 1)
    box[[0, -1]] = 0.5
    box /= box.sum() * h
    num = np.convolve(np.convolve(box, box), box) * h * h
    u = (np.arange(num.size) - (num.size - 1) / 2) * h
    assert np.max(np.abs(num - k(u))) <= 1e-6
    assert np.trapezoid(num, u) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("n", range(1, 13))
@pytest.mark.parametrize("eps", [0.1, 0.5, math.pi])
def test_structure_and_unit_integral(n, eps):
    if n > 8 and eps != 0.1:
        pytest.skip("the same rational arithmetic is covered at eps=0.1")
    k = order_n_kernel(n, eps)
    assert k.integral() == 1
    assert len(k.pieces) == n
    widths = {p.hi - p.lo for p in k.pieces}
    assert widths == {2 * Fraction(eps) / n}
    assert k.degree <= n - 1
    assert k.is_even()


@pytest.mark.parametrize("n", range(2, 10))
def test_smoothness_ladder(n):
    k = order_n_kernel(n, 0.1)
    for b in k.breakpoints[1:-1]:
        for d in range(n - 1):
            left, right = k.lateral_limits(b, d)
            assert left == right
        if n >= 2:
            left, right = k.lateral_limits(b, n - 1)
            assert left != right  # exactly C^(n-2), not smoother


def test_breakpoint_values_are_lateral_averages():
    k = order_n_kernel(3, 0.6)
    for b in k.breakpoints:
        left, right = k.lateral_limits(b)
        assert k.exact_value(b) == (left + right) / 2


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.floats(0.05, 3.0), st.floats(0.0, 1.0))
def test_evenness_sampled(n, eps, frac):
    k = order_n_kernel(n, eps)
    u = frac * eps
    assert k(u) == k(-u)


def test_order_validation():
    with pytest.raises(ValueError):
        order_n_kernel(0, 0.5)


def test_multiplier_examples():
    assert multiplier(1, math.pi, 1) == pytest.approx(0.0, abs=1e-15)
    assert multiplier(1, 0.37, 0) == 1.0
    assert multiplier(1, 0.5, 3) == pytest.approx(0.664997, abs=1e-6)
    assert multiplier(0, 0.5, 17) == 1.0
    with pytest.raises(ValueError):
        multiplier(1, 0.5, -1)


def test_multiplier_against_quadrature_of_filtered_cosine():
    from scipy import integrate
    eps, k = 0.5, 3
    val, _ = integrate.quad(lambda y: math.cos(k * y), -eps, eps)
    assert multiplier(1, eps, k) == pytest.approx(val / (2 * eps), abs=1e-12)


def test_multiplier_composition_law():
    k = np.arange(0, 200)
    np.testing.assert_array_equal(multiplier(1, 0.25, k) ** 2, multiplier(2, 0.5, k))


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_multiplier_consistency_with_sampled_kernel(n):
    eps = 0.5
    m = 2**17
    f = sample_function(order_n_kernel(n, eps), m)
    s = coefficients_from_samples(f, 64)
    k = np.arange(1, 65)
    # the order-1 jumps fall between nodes, costing O(h) in the trapezoid sum
    tol = 1e-6 if n > 1 else 1e-4
    np.testing.assert_allclose(s.cos_coeffs, multiplier(n, eps, k) / math.pi, atol=tol)
    assert s.half_mean == pytest.approx(1 / math.pi, abs=tol)


def test_kernel_series_delta():
    with pytest.raises(DivergentSeriesError):
        kernel_series(0, 0.5, 64)
    s = kernel_series(0, 0.5, 512, allow_divergent=True)
    np.testing.assert_array_equal(s.cos_coeffs, np.full(512, 1 / math.pi))
    assert classify_convergence(s).classification is Convergence.DIVERGENT_BOUNDED


def test_kernel_series_range_guard():
    with pytest.raises(ValueError, match="pi"):
        kernel_series(1, 4.0, 16)


def test_kernel_series_n2_matches_closed_form():
    eps = 0.5
    u = np.linspace(-math.pi, math.pi, 2001)
    far = np.min(np.abs(u[:, None] - np.array([-eps, 0, eps])), axis=1) > 0.05
    err = np.abs(evaluate(kernel_series(2, eps, 512), u) - order_n_kernel(2, eps)(u))
    assert err[far].max() <= 1e-3


def test_kernel_series_n1_centre():
    assert evaluate(kernel_series(1, 0.5, 4096), 0.0) == pytest.approx(1.0, abs=1e-2)


def test_range_n_eps_variant():
    k = order_n_kernel(3, 3 * 0.2)
    assert k.support == pytest.approx((-0.6, 0.6))
    assert k.pieces[0].hi - k.pieces[0].lo == 2 * Fraction(3 * 0.2) / 3


def test_kernel_table():
    t = kernel_table(first_order_kernel(0.5), [0.0, 0.5])
    np.testing.assert_array_equal(t, [[0.0, 1.0], [0.5, 0.5]])
