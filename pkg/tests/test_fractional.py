"""Fractional time derivatives, the square-function fields, and the
classical comparison profiles."""

import math

import numpy as np
import pytest

from besselharm.corpus import corpus_hankel_exact, make_test_corpus, zero_moment_window
from besselharm.fractional import (
    FractionalOrder,
    PhiProfile,
    bessel_constants,
    classical_coefficients_closed,
    classical_frac_h_norm,
    classical_poisson_frac,
    fit_classical_coefficients,
    frac_deriv_sw,
    frac_poisson_spectral,
    g_operator,
    g_script_kernel_route,
    g_script_operator,
    kernel_difference_probe,
    mixed_norm_ratio,
    poisson_frac_kernel,
    poisson_kernel_dtm,
    sw_weight,
)
from besselharm.functions import SampledFunction, l2_norm, lp_norm
from besselharm.grids import make_radial_grid, make_time_grid
from besselharm.hankel import apply_symbol
from besselharm.semigroups import riesz_star_spectral
from besselharm.special import bessel_j

LAM = 1.2


def test_offset_average_weights():
    assert sw_weight(1, 0) == 4.0
    assert sw_weight(1, 1) == 2.0
    assert sw_weight(2, 0) == 8.0
    with pytest.raises(ValueError):
        sw_weight(1, 2)
    assert FractionalOrder(0.5).m == 1
    assert FractionalOrder(1.0).m == 2
    with pytest.raises(ValueError):
        FractionalOrder(0.0)


def test_kernel_time_derivatives_match_finite_differences():
    x, y = np.array([1.0]), np.array([2.0])
    t, h = 0.7, 1e-4
    k0 = lambda tt: poisson_kernel_dtm(LAM, 0, tt, x, y)[0, 0]
    fd1 = (k0(t + h) - k0(t - h)) / (2.0 * h)
    k1 = poisson_kernel_dtm(LAM, 1, t, x, y)[0, 0]
    assert abs(k1 - fd1) <= 1e-6 * abs(fd1)
    fd2 = (k0(t + h) - 2.0 * k0(t) + k0(t - h)) / h**2
    k2 = poisson_kernel_dtm(LAM, 2, t, x, y)[0, 0]
    assert abs(k2 - fd2) <= 1e-5 * abs(fd2)


def test_fractional_derivative_of_exponential():
    x, t = 1.0, 0.5
    got, tail = frac_deriv_sw(lambda tau: -x * np.exp(-x * tau), t, 0.5)
    exact = np.exp(1j * math.pi * 0.5) * math.sqrt(x) * math.exp(-x * t)
    assert abs(got - exact) <= 1e-6 * abs(exact)
    assert tail <= 1e-6


def test_integer_order_is_the_plain_derivative():
    x, t = 1.0, 0.5
    got, _ = frac_deriv_sw(lambda tau: x * x * np.exp(-x * tau), t, 1.0)
    assert abs(got - (-x * math.exp(-x * t))) <= 1e-6 * x * math.exp(-x * t)


def test_half_orders_compose_to_order_one():
    x, t = 1.0, 0.5
    # first half-order output is i sqrt(x) e^(-x tau); feed its slope back in
    got, _ = frac_deriv_sw(lambda tau: -1j * x**1.5 * np.exp(-x * tau), t, 0.5)
    exact = -x * math.exp(-x * t)
    assert abs(got - exact) <= 1e-5 * abs(exact)
    assert abs(got.real - exact) <= 1e-5 * abs(exact) and abs(got.imag) <= 1e-5 * abs(exact)


def test_two_path_agreement(kernel_grid):
    f = make_test_corpus(kernel_grid, LAM, n_members=3, seed=7)[1]
    probes = np.linspace(0.05, 8.0, 40)
    y, w = kernel_grid.nodes, kernel_grid.weights
    args = np.multiply.outer(probes, y)
    Kp = np.sqrt(args) * bessel_j(LAM - 0.5, args) * w[None, :]
    hf = corpus_hankel_exact(f).values
    for beta in (0.5, 1.0, 1.5):
        consts = bessel_constants(LAM, beta)
        for t in (0.3, 1.0, 3.0):
            K = poisson_frac_kernel(LAM, beta, t, probes, y, constants=consts)
            route_a = K @ (w * f.values)
            sym = np.exp(1j * math.pi * beta) * (t * y) ** beta * np.exp(-t * y)
            route_b = Kp @ (sym * hf)
            assert np.linalg.norm(route_a - route_b) <= 1e-4 * np.linalg.norm(route_b)


def test_integer_order_sign_convention(field_grid):
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]
    got = frac_poisson_spectral(f, 1.0, 0.7)
    neg = apply_symbol(f, lambda y: y * np.exp(-0.7 * y))
    assert np.max(np.abs(got.values + 0.7 * neg.values)) <= 1e-12
    assert np.max(np.abs(got.values.imag)) <= 1e-12


def test_symbol_rescales_consistently_in_t(field_grid):
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]
    a = frac_poisson_spectral(f, 0.5, 1.4)
    b = apply_symbol(f, lambda y: np.exp(1j * math.pi * 0.5) * (1.4 * y) ** 0.5 * np.exp(-1.4 * y))
    assert np.array_equal(a.values, b.values)


def test_mixed_norm_constant(field_grid):
    """Squared field mass over dt/t dx against Gamma(2 beta) 2^(-2 beta);
    at beta = 1 the mixed norm is exactly half the input norm."""
    box = make_radial_grid(x_min=1e-4, x_max=300.0, panels=80, nodes_per_panel=16)
    tgrid = make_time_grid(1e-7, 2e3, 800)
    spectrum = make_radial_grid(
        x_min=1e-4, x_max=10.0, panels=24, nodes_per_panel=16, oscillation_limit=300.0
    )
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]
    ratio = mixed_norm_ratio(f, 1.0, tgrid, box, spectrum)
    assert abs(ratio - 0.25) <= 1e-4 * 0.25
    assert math.sqrt(ratio) == pytest.approx(0.5, rel=1e-4)


def test_g_operator_zero_field(field_grid, tgrid):
    zero = SampledFunction(field_grid, np.zeros(field_grid.size), LAM)
    assert np.max(np.abs(g_operator(zero, 1.0, tgrid).values)) == 0.0


def test_equivalence_ratio_windows(field_grid, tgrid):
    # window recorded from this grid family; the point is a fixed
    # two-sided band with a strictly positive floor
    for p in (1.5, 4.0):
        ratios = []
        for f in make_test_corpus(field_grid, LAM, n_members=3, seed=7):
            gf = g_operator(f, 1.0, tgrid)
            num = float(field_grid.integrate(gf.time_norm() ** p) ** (1.0 / p))
            ratios.append(num / lp_norm(f, p))
        assert 0.4 <= min(ratios) and max(ratios) <= 0.65
        assert max(ratios) / min(ratios) <= 1.2


def test_slope_field_factorization(transform_grid):
    f = make_test_corpus(transform_grid, LAM, n_members=3, seed=7)[1]
    rstar = riesz_star_spectral(f)
    slice_k = g_script_kernel_route(f, 2.0)
    slice_s = apply_symbol(rstar, lambda y: -(2.0 * y) * np.exp(-2.0 * y))
    gap = l2_norm(slice_k.with_values(slice_k.values - slice_s.values))
    assert gap <= 1e-3 * l2_norm(slice_k)


def test_slope_field_zero_and_stability(field_grid, tgrid):
    zero = SampledFunction(field_grid, np.zeros(field_grid.size), LAM)
    assert np.max(np.abs(g_script_operator(zero, tgrid).values)) == 0.0
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]

    def empirical_c(n):
        tg = make_time_grid(1e-3, 1e3, n)
        gf = g_script_operator(f, tg)
        return float(field_grid.integrate(gf.time_norm() ** 4.0) ** 0.25) / lp_norm(f, 4.0)

    c_coarse, c_fine = empirical_c(300), empirical_c(600)
    assert np.isfinite(c_coarse) and c_coarse > 0.0
    assert abs(c_coarse / c_fine - 1.0) <= 0.10


def test_comparison_profile_gaussian_closed_form(field_grid):
    member = make_test_corpus(field_grid, LAM, n_members=1, seed=7)[0]
    profile = PhiProfile(member)
    xs = np.linspace(0.0, 5.0, 30)
    exact = np.exp(-(xs**2) / 2.0) / math.sqrt(2.0 * math.pi)
    assert np.max(np.abs(profile(xs) - exact)) <= 1e-8
    assert np.array_equal(profile(-xs), profile(xs))
    assert profile.moment() == pytest.approx(1.0, abs=1e-12)


def test_comparison_profile_inherits_zero_moment(field_grid):
    psi = zero_moment_window(field_grid, LAM, seed=11)
    assert abs(PhiProfile(psi).moment()) <= 1e-6


def test_comparison_profile_quadrature_path(field_grid):
    psi = zero_moment_window(field_grid, LAM, seed=11)
    plain = SampledFunction(field_grid, psi.values, LAM, tail=psi.tail)
    xs = np.linspace(0.0, 4.0, 9)
    assert np.max(np.abs(PhiProfile(plain)(xs) - PhiProfile(psi)(xs))) <= 1e-8


def test_kernel_difference_probe_scaling_and_diagonal(field_grid, tgrid):
    psi = zero_moment_window(field_grid, LAM, seed=11)
    v1 = kernel_difference_probe(psi, 1.0, 1.6, tgrid)
    doubled = SampledFunction(
        field_grid,
        2.0 * psi.values,
        LAM,
        meta={"kind": "gauss-poly", "coeffs": tuple(2.0 * np.asarray(psi.meta["coeffs"]))},
    )
    v2 = kernel_difference_probe(doubled, 1.0, 1.6, tgrid)
    assert abs(v2 - 2.0 * v1) <= 1e-12 * v1
    diag = kernel_difference_probe(psi, 1.3, 1.3, tgrid)
    assert np.isfinite(diag) and diag >= 0.0


def test_classical_integer_slope_closed_form():
    zs = np.linspace(0.0, 6.0, 41)
    for t in (0.7, 1.3):
        got = classical_poisson_frac(t, zs, 1.0)
        exact = (t / math.pi) * (zs**2 - t**2) / (zs**2 + t**2) ** 2
        assert np.max(np.abs(got.real - exact)) <= 1e-8
        assert np.max(np.abs(got.imag)) <= 1e-12
    assert np.array_equal(classical_poisson_frac(0.7, -zs, 1.0), classical_poisson_frac(0.7, zs, 1.0))


def test_classical_offdiagonal_probe_bounded(tgrid):
    vals = [abs(z) * classical_frac_h_norm(z, 0.5, tgrid) for z in (0.5, 1.0, 2.0, 4.0)]
    assert all(np.isfinite(v) for v in vals)
    assert max(vals) <= 1.0


def test_fitted_classical_coefficients_match_closed_form():
    for beta in (0.5, 1.5):
        fitted, resid = fit_classical_coefficients(beta)
        closed = classical_coefficients_closed(beta)
        assert np.max(np.abs(fitted - closed)) <= 1e-6 * np.max(np.abs(closed))
        assert resid <= 1e-6
