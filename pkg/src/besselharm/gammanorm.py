"""Gaussian-sum norms of operators from the time Hilbert space into
finite-dimensional targets.

H is L^2((0,inf), dt/t).  An operator T: H -> B with finite rank K is
held as its coefficient array against an orthonormal basis {h_n}; the
gamma norm is E || sum_n g_n T(h_n) ||_B^2 under independent standard
Gaussians, estimated by Monte Carlo with a fixed counter-based stream
so repeated runs are bit-identical.  When B is a Hilbert space the
norm collapses to the Hilbert-Schmidt value and needs no sampling.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .functions import TimeField
from .grids import TimeGrid
from .spaces import FiniteBanachSpace

__all__ = [
    "HBasis",
    "GammaEstimate",
    "gamma_norm_exact_hilbert",
    "gamma_norm_mc",
    "field_coefficients",
    "lp_gamma_norm",
]


class HBasis:
    """Orthonormal profiles over a TimeGrid under the dt/t pairing.

    Hermite functions in the log-time variable, scaled so the highest
    retained order still decays inside the grid window, then
    re-orthonormalised against the discrete weights through a Cholesky
    factor of the Gram matrix.  margin widens the scale reserve beyond
    the classical turning point sqrt(2K+1).
    """

    def __init__(self, tgrid: TimeGrid, size: int = 64, margin: float = 4.2):
        if size < 1:
            raise ValueError("basis needs at least one profile")
        u = np.log(tgrid.nodes)
        u_half = max(abs(u[0]), abs(u[-1]))
        sigma = u_half / (math.sqrt(2.0 * size + 1.0) + margin)
        v = u / sigma
        raw = np.empty((size, tgrid.size))
        raw[0] = math.pi ** (-0.25) * np.exp(-0.5 * v * v)
        if size > 1:
            raw[1] = math.sqrt(2.0) * v * raw[0]
        for n in range(1, size - 1):
            raw[n + 1] = math.sqrt(2.0 / (n + 1)) * v * raw[n] - math.sqrt(
                n / (n + 1.0)
            ) * raw[n - 1]
        raw /= math.sqrt(sigma)
        gram = (raw * tgrid.weights[None, :]) @ raw.T
        L = np.linalg.cholesky(gram)
        self.profiles = np.linalg.solve(L, raw)
        self.tgrid = tgrid
        self.size = size
        self.sigma = sigma

    def gram(self) -> np.ndarray:
        return (self.profiles * self.tgrid.weights[None, :]) @ self.profiles.T

    def coefficients(self, values: np.ndarray) -> np.ndarray:
        """<values, h_n>_H along the time axis; trailing axes ride along."""
        return np.tensordot(self.profiles * self.tgrid.weights[None, :], values, axes=(1, 0))


class GammaEstimate(NamedTuple):
    value: float
    se: float
    samples: int


def gamma_norm_exact_hilbert(coeffs: np.ndarray) -> float:
    """Hilbert-Schmidt value, exact whenever the target norm is l^2."""
    return float(np.sqrt(np.sum(np.abs(coeffs) ** 2)))


def gamma_norm_mc(
    coeffs: np.ndarray,
    space: FiniteBanachSpace,
    n_samples: int = 4000,
    seed: int = 0,
    stream: int = 0,
) -> GammaEstimate:
    """Monte Carlo gamma norm of the operator with coefficient rows
    T(h_n) = coeffs[n].

    coeffs has shape (K,) for scalar targets or (K, dim).  The stream
    index separates independent substreams of one seed, so estimates
    at different grid nodes neither collide nor depend on evaluation
    order.
    """
    coeffs = np.asarray(coeffs)
    if coeffs.ndim == 1:
        coeffs = coeffs[:, None]
    k = coeffs.shape[0]
    rng = np.random.Generator(np.random.Philox(key=[seed, stream]))
    draws = rng.standard_normal((n_samples, k))
    vectors = draws @ coeffs
    sq = space.norm(vectors) ** 2
    mean = float(np.mean(sq))
    value = math.sqrt(mean)
    se_mean = float(np.std(sq, ddof=1)) / math.sqrt(n_samples)
    se = se_mean / (2.0 * value) if value > 0 else se_mean
    return GammaEstimate(value=value, se=se, samples=n_samples)


def field_coefficients(field: TimeField, basis: HBasis) -> np.ndarray:
    """Basis coefficients of every spatial slice: (K, x) or (K, x, dim)."""
    if field.tgrid is not basis.tgrid and field.tgrid.key != basis.tgrid.key:
        raise ValueError("field and basis live on different time grids")
    return basis.coefficients(field.values)


def lp_gamma_norm(
    field: TimeField,
    basis: HBasis,
    space: FiniteBanachSpace,
    p: float,
    n_samples: int = 4000,
    seed: int = 0,
) -> float:
    """L^p norm in x of the pointwise gamma norms of a TimeField.

    Hilbert targets skip sampling; otherwise each node runs its own
    substream.
    """
    C = field_coefficients(field, basis)
    nx = C.shape[1]
    g = np.empty(nx)
    if space.is_hilbert:
        flat = C.reshape(C.shape[0], nx, -1)
        g = np.sqrt(np.sum(np.abs(flat) ** 2, axis=(0, 2)))
    else:
        for j in range(nx):
            g[j] = gamma_norm_mc(C[:, j], space, n_samples, seed, stream=j).value
    return float(field.grid.integrate(g**p) ** (1.0 / p))
