"""Heat and Poisson semigroups, conjugate kernels, first-order structure,
and the Riesz transform."""

import math

import numpy as np
import pytest

from besselharm.corpus import make_test_corpus
from besselharm.functions import SampledFunction, l2_norm
from besselharm.grids import make_radial_grid
from besselharm.hankel import apply_symbol, transform_matrix
from besselharm.semigroups import (
    adjoint_conjugate_apply,
    d_lambda,
    d_lambda_star,
    heat_kernel,
    poisson_apply_kernel,
    poisson_apply_spectral,
    poisson_family,
    poisson_kernel_exact_lam1,
    poisson_mass_exact_lam1,
    poisson_profile,
    poisson_profile_function,
    riesz_apply_pv,
    riesz_spectral,
    riesz_star_spectral,
    subordinated_poisson,
)

LAM = 1.2


def _rel(grid, got, want, lam=LAM):
    scale = l2_norm(SampledFunction(grid, want, lam))
    return l2_norm(SampledFunction(grid, got - want, lam)) / scale


# ---- heat kernel ------------------------------------------------------


def test_heat_kernel_half_integer_closed_form():
    xs = np.array([0.3, 1.0, 2.5, 6.0])
    ys = np.array([0.5, 1.3, 4.0])
    for t in (0.25, 1.0):
        W = heat_kernel(1.0, t, xs[:, None], ys[None, :])
        exact = (4.0 * math.pi * t) ** -0.5 * (
            np.exp(-np.subtract.outer(xs, ys) ** 2 / (4.0 * t))
            - np.exp(-np.add.outer(xs, ys) ** 2 / (4.0 * t))
        )
        assert np.max(np.abs(W - exact)) <= 1e-10


def test_heat_kernel_symmetric_and_positive(field_grid):
    x = field_grid.nodes[:160]
    W = heat_kernel(1.5, 0.7, x[:, None], x[None, :])
    assert np.max(np.abs(W - W.T)) <= 1e-12
    assert np.min(W) > 0.0


def test_heat_semigroup_law_at_a_point(field_grid):
    t, s = 0.3, 0.7
    z = field_grid.nodes
    comp = field_grid.integrate(heat_kernel(1.5, t, 1.0, z) * heat_kernel(1.5, s, z, 2.0))
    exact = heat_kernel(1.5, t + s, np.array([1.0]), np.array([2.0]))[0]
    assert abs(comp - exact) <= 1e-5 * abs(exact)


# ---- Poisson kernel ---------------------------------------------------


def test_poisson_kernel_half_integer_closed_form(kernel_grid):
    P = poisson_family(1.0, 0.5, kernel_grid, need=("P",))["P"]
    exact = poisson_kernel_exact_lam1(
        0.5, kernel_grid.nodes[:, None], kernel_grid.nodes[None, :]
    )
    assert np.max(np.abs(P - exact)) <= 1e-8 * np.max(np.abs(exact))


def test_poisson_kernel_symmetric_and_positive(kernel_grid):
    P = poisson_family(LAM, 0.5, kernel_grid, need=("P",))["P"]
    assert np.max(np.abs(P - P.T)) <= 1e-10
    assert np.min(P) > 0.0


def test_poisson_kernel_route_matches_symbol_route(field_grid):
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]
    a = poisson_apply_kernel(f, 0.8)
    b = poisson_apply_spectral(f, 0.8)
    assert _rel(field_grid, a.values, b.values) <= 1e-5


def test_subordination_from_heat_flow(field_grid):
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]
    a = subordinated_poisson(f, 0.8)
    b = poisson_apply_spectral(f, 0.8)
    assert _rel(field_grid, a.values, b.values) <= 1e-5


def test_profile_value_and_small_x_slope():
    assert poisson_profile(1.0, np.array([1.0]))[0] == pytest.approx(
        2.0**1.5 / (4.0 * math.sqrt(math.pi)), abs=1e-15
    )
    a, b = 1e-4, 1e-3
    slope = (
        math.log(poisson_profile(LAM, np.array([b]))[0])
        - math.log(poisson_profile(LAM, np.array([a]))[0])
    ) / (math.log(b) - math.log(a))
    assert abs(slope - LAM) <= 0.01


def test_profile_transform_is_exponential_symbol():
    # the profile tail decays only algebraically, so the spatial box is
    # stretched and the spectral window kept small to hold the phase down
    box = make_radial_grid(x_max=400.0, panels=60, nodes_per_panel=12, oscillation_limit=3.0)
    out = make_radial_grid(x_min=0.2, x_max=3.0, panels=3, nodes_per_panel=6)
    K = poisson_profile_function(box, LAM, 0.8)
    got = transform_matrix(LAM, box, out) @ K.values
    exact = out.nodes**LAM * np.exp(-0.8 * out.nodes)
    assert np.max(np.abs(got - exact)) <= 1e-5


def test_poisson_approximate_identity(field_grid):
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]
    a = poisson_apply_spectral(f, 1e-3)
    assert _rel(field_grid, a.values, f.values) < 0.01


def test_poisson_semigroup_law():
    # the first application grows an algebraic tail, so composition is
    # checked on a long box; the kernel route needs no transform there
    box = make_radial_grid(x_max=60.0, panels=80, nodes_per_panel=12, oscillation_limit=1.0)
    f = make_test_corpus(box, LAM, n_members=3, seed=7)[1]
    twice = poisson_apply_kernel(poisson_apply_kernel(f, 0.4), 0.9)
    once = poisson_apply_kernel(f, 1.3)
    assert _rel(box, twice.values, once.values) <= 1e-5


def test_poisson_mass_is_strictly_submarkovian(kernel_grid):
    t = 0.5
    P = poisson_family(1.0, t, kernel_grid, need=("P",))["P"]
    mass_num = P @ kernel_grid.weights
    x = kernel_grid.nodes
    a, b = kernel_grid.x_min, kernel_grid.x_max
    mass_box = (1.0 / math.pi) * (
        np.arctan((b - x) / t)
        - np.arctan((a - x) / t)
        - np.arctan((b + x) / t)
        + np.arctan((a + x) / t)
    )
    assert np.max(np.abs(mass_num - mass_box)) <= 1e-8
    total = poisson_mass_exact_lam1(t, x)
    assert np.all(mass_num < total) and np.all(total < 1.0)


# ---- conjugate kernels and Cauchy-Riemann -----------------------------


@pytest.fixture(scope="module")
def cr_setup(kernel_grid):
    f = make_test_corpus(kernel_grid, LAM, n_members=3, seed=7)[1]
    w = kernel_grid.weights

    def apply(kind, t):
        M = poisson_family(LAM, t, kernel_grid, need=(kind,))[kind]
        return M @ (w * f.values)

    return f, apply


def test_cauchy_riemann_forward_by_centered_difference(kernel_grid, cr_setup):
    _, apply = cr_setup
    t, h = 0.5, 0.005
    Pf = SampledFunction(kernel_grid, apply("P", t), LAM)
    dtQ = (apply("Q", t + h) - apply("Q", t - h)) / (2.0 * h)
    assert _rel(kernel_grid, d_lambda(Pf).values, dtQ) < 1e-4


def test_cauchy_riemann_adjoint_by_centered_difference(kernel_grid, cr_setup):
    _, apply = cr_setup
    t, h = 0.5, 0.005
    Qf = SampledFunction(kernel_grid, apply("Q", t), LAM)
    dtP = (apply("P", t + h) - apply("P", t - h)) / (2.0 * h)
    assert _rel(kernel_grid, d_lambda_star(Qf, lam=LAM).values, dtP) < 1e-4


def test_assembled_slope_kernels_match_centered_difference(kernel_grid):
    t, h = 0.5, 1e-3
    fam = poisson_family(LAM, t, kernel_grid, need=("P", "dtP"))
    Pp = poisson_family(LAM, t + h, kernel_grid, need=("P",))["P"]
    Pm = poisson_family(LAM, t - h, kernel_grid, need=("P",))["P"]
    fd = (Pp - Pm) / (2.0 * h)
    assert np.max(np.abs(fd - fam["dtP"])) <= 1e-5 * np.max(np.abs(fam["dtP"]))


def test_poisson_of_adjoint_riesz_is_adjoint_conjugate(transform_grid):
    f = make_test_corpus(transform_grid, LAM, n_members=3, seed=7)[1]
    rstar = riesz_star_spectral(f)
    for t in (0.5, 1.0):
        lhs = poisson_apply_spectral(rstar, t)
        rhs = adjoint_conjugate_apply(f, t)
        assert _rel(transform_grid, lhs.values, rhs.values) <= 1e-4


# ---- first-order structure --------------------------------------------


def test_derivative_annihilates_pure_power(field_grid):
    f = SampledFunction(field_grid, field_grid.nodes**LAM, LAM)
    assert np.max(np.abs(d_lambda(f).values)) <= 1e-8


def test_derivative_of_gaussian_member(field_grid):
    f = make_test_corpus(field_grid, LAM, n_members=1, seed=7)[0]
    exact = -field_grid.nodes ** (LAM + 1.0) * np.exp(-field_grid.nodes**2 / 2.0)
    assert np.max(np.abs(d_lambda(f).values - exact)) <= 1e-6 * np.max(np.abs(exact))


def test_derivative_adjoint_pairing(field_grid):
    corpus = make_test_corpus(field_grid, LAM, n_members=4, seed=7)
    f, g = corpus[1], corpus[3]
    lhs = field_grid.integrate(d_lambda(f).values * g.values)
    rhs = field_grid.integrate(f.values * d_lambda_star(g, lam=LAM).values)
    assert abs(lhs - rhs) <= 1e-5 * abs(rhs)


# ---- Riesz transform --------------------------------------------------


def test_riesz_principal_value_matches_spectral(field_grid):
    f = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1]
    probes = np.array([0.8, 1.5, 3.0])
    pv = riesz_apply_pv(f, probes)
    spectral = field_grid.interpolate(riesz_spectral(f).values, probes)
    assert np.max(np.abs(pv - spectral)) <= 1e-3 * np.max(np.abs(spectral))


def test_riesz_l2_bound(field_grid):
    for f in make_test_corpus(field_grid, LAM, n_members=3, seed=7):
        assert l2_norm(riesz_spectral(f)) <= 1.05 * l2_norm(f)


def test_riesz_linearity(field_grid):
    f, g = make_test_corpus(field_grid, LAM, n_members=3, seed=7)[1:]
    lhs = riesz_spectral(f.with_values(2.0 * f.values - 0.5 * g.values)).values
    rhs = 2.0 * riesz_spectral(f).values - 0.5 * riesz_spectral(g).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))


# ---- intertwining -----------------------------------------------------


_LAM1 = 1.0
_T = 0.5


@pytest.fixture(scope="module")
def pieces(field_grid):
    f = make_test_corpus(field_grid, _LAM1, n_members=3, seed=7)[1]
    rstar = riesz_star_spectral(f)

    def fd(h):
        a = poisson_apply_spectral(rstar, _T + h)
        b = poisson_apply_spectral(rstar, _T - h)
        return (a.values - b.values) / (2.0 * h)

    return f, rstar, fd


class TestIntertwining:
    """The time slope of the conjugate extension equals the lowered
    derivative of the semigroup one class up."""

    LAM1 = _LAM1
    T = _T

    def test_identity_at_centered_difference_step(self, field_grid, pieces):
        f, _, fd = pieces
        K1 = transform_matrix(self.LAM1 + 1.0, field_grid, field_grid)
        lifted = SampledFunction(
            field_grid,
            K1 @ (np.exp(-field_grid.nodes * self.T) * (K1 @ f.values)),
            self.LAM1 + 1.0,
        )
        rhs = d_lambda_star(lifted, lam=self.LAM1).values
        assert _rel(field_grid, fd(self.T / 100.0), rhs, lam=self.LAM1) < 1e-3

    def test_zero_input_gives_zero(self, field_grid):
        zero = SampledFunction(field_grid, np.zeros(field_grid.size), self.LAM1)
        lhs = poisson_apply_spectral(riesz_star_spectral(zero), self.T)
        assert np.max(np.abs(lhs.values)) == 0.0

    def test_centered_difference_converges_at_second_order(self, field_grid, pieces):
        _, rstar, fd = pieces
        exact = apply_symbol(rstar, lambda y: -y * np.exp(-self.T * y)).values
        r1 = l2_norm(SampledFunction(field_grid, fd(0.1) - exact, self.LAM1))
        r2 = l2_norm(SampledFunction(field_grid, fd(0.05) - exact, self.LAM1))
        assert math.log2(r1 / r2) >= 1.9
