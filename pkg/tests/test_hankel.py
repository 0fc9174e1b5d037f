"""Hankel transform: isometry, involution, symbol calculus, pairings."""

import warnings

import numpy as np
import pytest

from besselharm.corpus import corpus_hankel_exact, make_test_corpus
from besselharm.functions import l2_norm
from besselharm.grids import make_radial_grid
from besselharm.hankel import (
    apply_symbol,
    cache_info,
    hankel_transform,
    plancherel_pairing,
    transform_matrix,
)


def test_gaussian_profile_is_self_reciprocal(transform_grid):
    f = make_test_corpus(transform_grid, 1.0, n_members=1, seed=0)[0]
    hf = hankel_transform(f)
    scale = np.max(np.abs(f.values))
    assert np.max(np.abs(hf.values - f.values)) <= 1e-6 * scale


def test_transform_matches_exact_corpus_transform(transform_grid):
    for lam in (0.5, 2.3):
        for f in make_test_corpus(transform_grid, lam, n_members=3, seed=7):
            hf = hankel_transform(f)
            exact = corpus_hankel_exact(f)
            gap = l2_norm(hf.with_values(hf.values - exact.values))
            assert gap <= 1e-6 * l2_norm(exact)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.3])
def test_isometry_and_involution(transform_grid, lam):
    for f in make_test_corpus(transform_grid, lam, n_members=3, seed=7):
        hf = hankel_transform(f)
        assert abs(l2_norm(hf) / l2_norm(f) - 1.0) <= 1e-6
        back = hankel_transform(hf)
        assert l2_norm(back.with_values(back.values - f.values)) <= 1e-5 * l2_norm(f)


def test_apply_symbol_identity(transform_grid):
    f = make_test_corpus(transform_grid, 1.2, n_members=2, seed=7)[1]
    g = apply_symbol(f, lambda y: np.ones_like(y))
    assert l2_norm(g.with_values(g.values - f.values)) <= 1e-5 * l2_norm(f)


def test_apply_symbol_accepts_arrays(transform_grid):
    f = make_test_corpus(transform_grid, 1.2, n_members=2, seed=7)[1]
    sym = np.exp(-0.7 * transform_grid.nodes)
    a = apply_symbol(f, sym)
    b = apply_symbol(f, lambda y: np.exp(-0.7 * y))
    assert np.max(np.abs(a.values - b.values)) <= 1e-12


def test_symbol_products_compose(transform_grid):
    # symbols even in y (functions of y^2) keep the intermediate stage in
    # the class the grid resolves, so no round-trip tail leaks in
    f = make_test_corpus(transform_grid, 1.2, n_members=2, seed=7)[1]
    m1 = lambda y: np.exp(-y * y / 4.0)
    m2 = lambda y: 1.0 / (1.0 + y * y)
    stacked = apply_symbol(apply_symbol(f, m1), m2)
    merged = apply_symbol(f, lambda y: m1(y) * m2(y))
    gap = l2_norm(stacked.with_values(stacked.values - merged.values))
    assert gap <= 1e-6 * l2_norm(merged)


def test_transform_is_linear(transform_grid):
    f, g = make_test_corpus(transform_grid, 1.2, n_members=3, seed=7)[1:]
    combo = f.with_values(2.0 * f.values - 3.0 * g.values)
    direct = hankel_transform(combo).values
    split = 2.0 * hankel_transform(f).values - 3.0 * hankel_transform(g).values
    assert np.max(np.abs(direct - split)) <= 1e-12 * max(1.0, np.max(np.abs(split)))


def test_plancherel_gaussian_value(transform_grid):
    f = make_test_corpus(transform_grid, 1.0, n_members=1, seed=0)[0]
    result = plancherel_pairing(f, f)
    want = np.sqrt(np.pi) / 4.0
    assert abs(result.direct - want) <= 1e-6
    assert abs(result.spectral - want) <= 1e-6
    assert result.discrepancy <= 1e-6


def test_plancherel_orthogonal_pair(transform_grid):
    f, g = make_test_corpus(transform_grid, 1.2, n_members=3, seed=7)[1:]
    # Gram-Schmidt in the discrete inner product
    coeff = transform_grid.integrate(g.values * f.values) / transform_grid.integrate(
        f.values * f.values
    )
    g_perp = g.with_values(g.values - coeff * f.values)
    result = plancherel_pairing(f, g_perp)
    # both routes must see the orthogonality; the relative discrepancy is
    # meaningless when the pairing itself vanishes
    assert abs(result.direct) <= 1e-6
    assert abs(result.spectral) <= 1e-6


def test_plancherel_random_pair(transform_grid):
    f, g = make_test_corpus(transform_grid, 2.3, n_members=3, seed=9)[1:]
    assert plancherel_pairing(f, g).discrepancy <= 1e-6


def test_phase_budget_warning():
    wild = make_radial_grid(x_min=0.1, x_max=30.0, panels=4, nodes_per_panel=4)
    with pytest.warns(UserWarning):
        transform_matrix(1.0, wild)
    tame = make_radial_grid(x_min=0.1, x_max=2.0, panels=8, nodes_per_panel=4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        transform_matrix(1.0, tame)


def test_transform_matrix_cache_reuse(kernel_grid):
    transform_matrix(1.2, kernel_grid)
    before = cache_info()
    transform_matrix(1.2, kernel_grid)
    after = cache_info()
    assert after == before
    assert after["entries"] >= 1 and after["bytes"] > 0
