"""Gaussian-sum norm estimation: basis construction, Monte Carlo
estimates against closed forms, and the mixed-norm reductions.

Every Monte Carlo assertion is a 3-standard-error band around an exact
value, with the seeds fixed, so these tests are deterministic."""

import math

import numpy as np
import pytest

from besselharm.corpus import make_test_corpus
from besselharm.fractional import g_operator
from besselharm.functions import TimeField, TimeProfile
from besselharm.gammanorm import (
    HBasis,
    field_coefficients,
    gamma_norm_exact_hilbert,
    gamma_norm_mc,
    lp_gamma_norm,
)
from besselharm.grids import make_time_grid
from besselharm.spaces import ellq_space, hilbert_space, scalar_space

LAM = 1.2


@pytest.fixture(scope="module")
def basis(tgrid):
    return HBasis(tgrid, size=64)


def test_single_profile_is_normalized(tgrid):
    b = HBasis(tgrid, size=1)
    assert TimeProfile(tgrid, b.profiles[0]).norm_dt_over_t() == pytest.approx(1.0, abs=1e-8)


def test_gram_matrix_is_identity(tgrid):
    b = HBasis(tgrid, size=16)
    assert np.max(np.abs(b.gram() - np.eye(16))) <= 1e-8


def test_profiles_decay_at_grid_ends(basis):
    assert np.max(np.abs(basis.profiles[:, [0, -1]])) <= 1e-10


def test_overcomplete_basis_is_rejected():
    short = make_time_grid(1.0, 2.0, 4)
    with pytest.raises(np.linalg.LinAlgError):
        HBasis(short, size=8)
    with pytest.raises(ValueError):
        HBasis(short, size=0)


def test_scalar_estimate_recovers_h_norm(tgrid, basis):
    """Truncated coefficient energy doubles as a capture certificate:
    the basis holds 99.9 percent of the profile's squared norm."""
    h = tgrid.nodes * np.exp(-tgrid.nodes)
    c = basis.coefficients(h)
    h_sq = TimeProfile(tgrid, h).norm_dt_over_t() ** 2
    assert float(np.sum(c**2)) / h_sq >= 0.999
    truncated = gamma_norm_exact_hilbert(c)
    assert abs(truncated - 0.5) < 1e-3
    est = gamma_norm_mc(c, scalar_space(), n_samples=4000, seed=42)
    assert abs(est.value - truncated) <= 3.0 * est.se


def test_rank_one_estimate_recovers_target_norm():
    b = np.array([1.0, -2.0, 0.5])
    coeffs = np.zeros((64, 3))
    coeffs[5] = 0.7 * b
    exact = 0.7 * float(np.sum(np.abs(b) ** 4) ** 0.25)
    est = gamma_norm_mc(coeffs, ellq_space(3, 4.0), n_samples=4000, seed=3)
    assert abs(est.value - exact) <= 3.0 * est.se


def test_hilbert_target_estimate_matches_hilbert_schmidt():
    C = np.random.default_rng(9).standard_normal((64, 5))
    est = gamma_norm_mc(C, hilbert_space(5), n_samples=4000, seed=9)
    assert abs(est.value - gamma_norm_exact_hilbert(C)) <= 3.0 * est.se


def test_estimates_are_deterministic_and_streams_separate():
    C = np.random.default_rng(9).standard_normal((64, 5))
    sp = ellq_space(5, 4.0)
    a = gamma_norm_mc(C, sp, n_samples=2000, seed=11, stream=4)
    b = gamma_norm_mc(C, sp, n_samples=2000, seed=11, stream=4)
    assert a.value == b.value and a.se == b.se
    c = gamma_norm_mc(C, sp, n_samples=2000, seed=11, stream=5)
    assert c.value != a.value


def test_estimate_invariant_under_basis_rotation():
    C = np.random.default_rng(9).standard_normal((64, 5))
    Q, _ = np.linalg.qr(np.random.default_rng(17).standard_normal((64, 64)))
    sp = ellq_space(5, 4.0)
    a = gamma_norm_mc(Q @ C, sp, n_samples=4000, seed=11)
    b = gamma_norm_mc(C, sp, n_samples=4000, seed=12)
    assert abs(a.value - b.value) <= 3.0 * math.hypot(a.se, b.se)


def test_mixed_norm_scalar_reduction(field_grid, tgrid, basis):
    f = make_test_corpus(field_grid, LAM, n_members=2, seed=7)[1]
    gf = g_operator(f, 1.0, tgrid)
    got = lp_gamma_norm(gf, basis, scalar_space(), 2.0)
    direct = float(np.sqrt(field_grid.integrate(gf.time_norm() ** 2)))
    assert abs(got / direct - 1.0) <= 1e-3


def test_mixed_norm_zero_field(field_grid, tgrid, basis):
    zero = TimeField(
        tgrid=tgrid, grid=field_grid, values=np.zeros((tgrid.size, field_grid.size)), lam=LAM
    )
    assert lp_gamma_norm(zero, basis, scalar_space(), 2.0) == 0.0


def test_mixed_norm_vector_hilbert_schmidt_reduction(field_grid, tgrid, basis):
    f = make_test_corpus(field_grid, LAM, n_members=2, seed=7)[1]
    gf = g_operator(f, 1.0, tgrid)
    vec = np.stack([gf.values, 0.5 * gf.values], axis=2)
    vf = TimeField(tgrid=tgrid, grid=field_grid, values=vec, lam=LAM)
    got = lp_gamma_norm(vf, basis, hilbert_space(2), 2.0)
    manual = float(np.sqrt(field_grid.integrate(1.25 * gf.time_norm() ** 2)))
    assert abs(got / manual - 1.0) <= 1e-3


def test_field_coefficients_rejects_foreign_grid(field_grid, tgrid, basis):
    other = make_time_grid(1e-2, 1e2, 300)
    f = make_test_corpus(field_grid, LAM, n_members=2, seed=7)[1]
    gf = g_operator(f, 1.0, other)
    with pytest.raises(ValueError):
        field_coefficients(gf, basis)
