"""Quadrature grids: exactness, spacing invariants, config round-trips."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besselharm.grids import (
    PHASE_BUDGET,
    grid_config_block,
    grids_from_config,
    make_radial_grid,
    make_time_grid,
    parse_config_block,
)


def test_radial_nodes_and_weights(transform_grid):
    g = transform_grid
    assert np.all(np.diff(g.nodes) > 0)
    assert g.nodes[0] > g.x_min and g.nodes[-1] < g.x_max
    assert np.all(g.weights > 0)


def test_radial_integrates_constant(transform_grid, kernel_grid):
    for g in (transform_grid, kernel_grid):
        total = g.integrate(np.ones_like(g.nodes))
        want = g.x_max - g.x_min
        assert abs(total - want) <= 1e-10 * want


@given(degree=st.integers(min_value=0, max_value=7),
       lead=st.floats(min_value=-4.0, max_value=4.0))
@settings(max_examples=40, deadline=None)
def test_panel_rule_polynomial_exactness(degree, lead):
    # degree npp-1 is the guaranteed class for an npp-node panel rule
    g = make_radial_grid(x_min=0.5, x_max=3.0, panels=3, nodes_per_panel=8)
    coeffs = np.zeros(degree + 1)
    coeffs[0] = lead if lead != 0.0 else 1.0
    coeffs[-1] = 1.0
    vals = np.polynomial.polynomial.polyval(g.nodes, coeffs)
    anti = np.polynomial.polynomial.polyint(coeffs)
    want = (np.polynomial.polynomial.polyval(3.0, anti)
            - np.polynomial.polynomial.polyval(0.5, anti))
    assert abs(g.integrate(vals) - want) <= 1e-12 * max(1.0, abs(want))


def test_radial_interpolate_and_derivative():
    g = make_radial_grid(x_min=0.1, x_max=6.0, panels=8, nodes_per_panel=12)
    vals = np.exp(-g.nodes)
    xq = np.array([0.17, 0.9, 2.3, 5.1])
    assert np.max(np.abs(g.interpolate(vals, xq) - np.exp(-xq))) < 1e-10
    dv = g.derivative(vals)
    assert np.max(np.abs(dv + vals)) < 1e-8


def test_radial_cumulative_recovers_antiderivative():
    g = make_radial_grid(x_min=0.1, x_max=6.0, panels=8, nodes_per_panel=12)
    cum = g.cumulative(np.cos(g.nodes), head=np.sin(g.x_min))
    assert np.max(np.abs(cum - np.sin(g.nodes))) < 1e-10


def test_oscillation_limit_caps_panel_length():
    g = make_radial_grid(oscillation_limit=40.0)
    assert g.max_panel_length <= PHASE_BUDGET / 40.0 * (1 + 1e-12)
    coarse = make_radial_grid()
    assert coarse.max_panel_length > g.max_panel_length


def test_radial_grid_rejects_bad_shapes():
    with pytest.raises(ValueError):
        make_radial_grid(x_min=0.0)
    with pytest.raises(ValueError):
        make_radial_grid(x_min=2.0, x_max=1.0)
    with pytest.raises(ValueError):
        make_radial_grid(panels=0)
    with pytest.raises(ValueError):
        make_radial_grid(nodes_per_panel=1)


def test_grid_key_tracks_configuration():
    a = make_radial_grid(x_max=16.0, oscillation_limit=16.0)
    b = make_radial_grid(x_max=16.0, oscillation_limit=16.0)
    c = make_radial_grid(x_max=16.0, oscillation_limit=24.0)
    assert a.key == b.key
    assert a.key != c.key


def test_time_grid_log_uniform(tgrid):
    ratios = np.diff(tgrid.log_nodes)
    assert np.max(np.abs(ratios - ratios[0])) <= 1e-12


def test_time_grid_integrates_dt_over_t(tgrid):
    # weights already carry the dt/t measure
    total = tgrid.integrate(np.ones(tgrid.size))
    want = np.log(tgrid.t_max / tgrid.t_min)
    assert abs(total - want) <= 1e-10 * want


def test_time_grid_interpolation_on_smooth_profile(tgrid):
    vals = np.exp(-((np.log(tgrid.nodes)) ** 2) / 8.0)
    tq = np.array([0.013, 0.7, 31.0])
    want = np.exp(-((np.log(tq)) ** 2) / 8.0)
    assert np.max(np.abs(tgrid.interpolate(vals, tq) - want)) < 1e-9


def test_config_block_round_trip(kernel_grid, tgrid):
    text = grid_config_block(kernel_grid, tgrid)
    parsed = parse_config_block(text)
    g2, t2 = grids_from_config(parsed)
    assert g2.key == kernel_grid.key
    assert t2.key == tgrid.key


def test_parse_config_block_values():
    parsed = parse_config_block(
        "# comment line\nalpha = 1.5\nflag = true\nnames = a, b\ncount = 3\n"
    )
    assert parsed == {"alpha": 1.5, "flag": True, "names": ["a", "b"], "count": 3}


def test_parse_config_block_rejects_bare_token():
    with pytest.raises(ValueError):
        parse_config_block("value 3\n")
