"""Hankel transform of order lam - 1/2 as dense quadrature matrices.

h(f)(x) = integral_0^inf sqrt(xy) J_{lam-1/2}(xy) f(y) dy

The transform is its own inverse on L^2, so one cached matrix per
(order, input grid, output grid) serves both directions.  Rows are
quadrature rules in y against an oscillatory kernel; the input grid
must resolve frequencies up to the largest output node, which is what
``RadialGrid.oscillation_limit`` is for.  ``transform_matrix`` warns
when the requested pairing exceeds the grid's phase budget.
"""

from __future__ import annotations

import warnings
from collections import OrderedDict

import numpy as np

from .functions import PairingResult, SampledFunction, inner
from .grids import PHASE_BUDGET, RadialGrid
from .special import bessel_j

__all__ = [
    "transform_matrix",
    "hankel_transform",
    "apply_symbol",
    "plancherel_pairing",
]

_MATRIX_CACHE: OrderedDict[tuple, np.ndarray] = OrderedDict()
_CACHE_SIZE = 8


def transform_matrix(lam: float, in_grid: RadialGrid, out_grid: RadialGrid | None = None) -> np.ndarray:
    """Dense transform matrix K with (K f)(x_i) = sum_j K[i,j] f(y_j)."""
    if out_grid is None:
        out_grid = in_grid
    key = (float(lam), in_grid.key, out_grid.key)
    hit = _MATRIX_CACHE.get(key)
    if hit is not None:
        _MATRIX_CACHE.move_to_end(key)
        return hit
    budget = out_grid.x_max * in_grid.max_panel_length
    if budget > PHASE_BUDGET * 1.0001:
        warnings.warn(
            f"input grid resolves phases up to {PHASE_BUDGET / in_grid.max_panel_length:.3g} "
            f"but output reaches x = {out_grid.x_max:.3g}; raise oscillation_limit",
            stacklevel=2,
        )
    nu = lam - 0.5
    args = np.multiply.outer(out_grid.nodes, in_grid.nodes)
    kern = bessel_j(nu, args.ravel()).reshape(args.shape)
    kern *= np.sqrt(args)
    kern *= in_grid.weights[None, :]
    _MATRIX_CACHE[key] = kern
    while len(_MATRIX_CACHE) > _CACHE_SIZE:
        _MATRIX_CACHE.popitem(last=False)
    return kern


def cache_info() -> dict:
    return {
        "entries": len(_MATRIX_CACHE),
        "bytes": int(sum(m.nbytes for m in _MATRIX_CACHE.values())),
    }


def hankel_transform(f: SampledFunction, out_grid: RadialGrid | None = None) -> SampledFunction:
    grid = out_grid if out_grid is not None else f.grid
    K = transform_matrix(f.lam, f.grid, grid)
    return SampledFunction(grid=grid, values=K @ f.values, lam=f.lam, meta={"transform_of": f.meta.get("label", "")})


def apply_symbol(f: SampledFunction, symbol) -> SampledFunction:
    """h^(-1)(s(y) h(f)(y)) on the function's own grid.

    ``symbol`` is a callable of the spectral variable or a node array.
    """
    K = transform_matrix(f.lam, f.grid, f.grid)
    s = symbol(f.grid.nodes) if callable(symbol) else np.asarray(symbol)
    spec = K @ f.values
    if spec.ndim > 1:
        spec = spec * s[:, None]
    else:
        spec = spec * s
    return f.with_values(K @ spec)


def plancherel_pairing(f: SampledFunction, g: SampledFunction) -> PairingResult:
    """Pair f against g directly and through the transform."""
    direct = inner(f, g)
    ft = hankel_transform(f)
    gt = hankel_transform(g)
    spectral = inner(ft, gt)
    scale = max(abs(direct), abs(spectral), 1e-300)
    return PairingResult(direct=direct, spectral=spectral, discrepancy=abs(direct - spectral) / scale)
