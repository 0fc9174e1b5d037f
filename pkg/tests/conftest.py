"""Shared fixtures: the three radial-grid presets and a default time grid.

Session scope matters here; transform matrices are cached per grid key,
so reusing one grid object across test modules keeps the suite fast.
"""

import pytest

from besselharm.corpus import make_test_corpus
from besselharm.grids import make_radial_grid, make_time_grid


@pytest.fixture(scope="session")
def transform_grid():
    return make_radial_grid(oscillation_limit=40.0)


@pytest.fixture(scope="session")
def field_grid():
    return make_radial_grid(x_max=16.0, panels=48, nodes_per_panel=16, oscillation_limit=40.0)


@pytest.fixture(scope="session")
def kernel_grid():
    return make_radial_grid(x_max=16.0, oscillation_limit=16.0)


@pytest.fixture(scope="session")
def tgrid():
    return make_time_grid(1e-3, 1e3, 600)


@pytest.fixture(scope="session")
def corpus12(field_grid):
    return make_test_corpus(field_grid, 1.2, n_members=6, seed=7)
