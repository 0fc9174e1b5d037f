"""Sampled-function containers and half-line norms.

``SampledFunction`` couples values at the nodes of a ``RadialGrid``
with the order parameter ``lam`` of the Bessel setting the function
lives in.  Near the origin members of the working class behave like
x^lam times a smooth even function, so evaluation below x_min follows
that power law; beyond x_max functions are either treated as zero or
extended by a caller-declared power tail.

``TimeProfile`` and ``TimeField`` hold scalar- and space-valued maps of
the semigroup parameter t on a ``TimeGrid``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .grids import RadialGrid, TimeGrid

__all__ = [
    "SampledFunction",
    "TimeProfile",
    "TimeField",
    "PairingResult",
    "lp_norm",
    "l2_norm",
    "inner",
    "hardy_head",
    "hardy_tail",
]


@dataclass(frozen=True)
class SampledFunction:
    grid: RadialGrid
    values: np.ndarray
    lam: float
    tail: tuple[str, float] | None = None  # ("power", p): f ~ C x^p past x_max
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.values.shape[0] != self.grid.size:
            raise ValueError("values do not match grid")

    @property
    def width(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    def with_values(self, values: np.ndarray) -> "SampledFunction":
        return replace(self, values=values)

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out_dtype = self.values.dtype
        if self.values.ndim == 1:
            out = np.zeros(x.shape, dtype=out_dtype)
        else:
            out = np.zeros(x.shape + (self.values.shape[1],), dtype=out_dtype)
        inside = (x >= self.grid.x_min) & (x <= self.grid.x_max)
        below = x < self.grid.x_min
        above = x > self.grid.x_max
        if inside.any():
            out[inside] = self.grid.interpolate(self.values, x[inside])
        if below.any():
            # x^lam profile anchored at the first node
            x0 = self.grid.nodes[0]
            f0 = self.values[0]
            ratio = (x[below] / x0) ** self.lam
            out[below] = np.multiply.outer(ratio, f0) if self.values.ndim > 1 else ratio * f0
        if above.any() and self.tail is not None:
            kind, p = self.tail
            if kind != "power":
                raise ValueError(f"unknown tail {kind!r}")
            x1 = self.grid.nodes[-1]
            f1 = self.values[-1]
            ratio = (x[above] / x1) ** p
            out[above] = np.multiply.outer(ratio, f1) if self.values.ndim > 1 else ratio * f1
        return out


@dataclass(frozen=True)
class TimeProfile:
    tgrid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape[0] != self.tgrid.size:
            raise ValueError("values do not match time grid")

    def norm_dt_over_t(self) -> float:
        """L^2((0,inf), dt/t) norm of the stored profile."""
        return float(np.sqrt(self.tgrid.integrate(np.abs(self.values) ** 2).real))


@dataclass(frozen=True)
class TimeField:
    """Space-time array F(t_i, x_j[, component])."""

    tgrid: TimeGrid
    grid: RadialGrid
    values: np.ndarray
    lam: float

    def __post_init__(self):
        if self.values.shape[0] != self.tgrid.size or self.values.shape[1] != self.grid.size:
            raise ValueError("values do not match grids")

    def time_norm(self) -> np.ndarray:
        """Pointwise-in-x L^2(dt/t) norm, reducing components by sum of
        squared moduli."""
        sq = np.abs(self.values) ** 2
        while sq.ndim > 2:
            sq = sq.sum(axis=-1)
        return np.sqrt(np.tensordot(self.tgrid.weights, sq, axes=(0, 0)))

    def square_function_norm(self) -> float:
        g = self.time_norm()
        return float(np.sqrt(self.grid.integrate(g * g)))


class PairingResult(NamedTuple):
    direct: complex
    spectral: complex
    discrepancy: float


def lp_norm(f: SampledFunction, p: float) -> float:
    a = np.abs(f.values)
    if a.ndim > 1:
        a = np.sqrt((a * a).sum(axis=1))
    if np.isinf(p):
        return float(a.max())
    return float(f.grid.integrate(a**p) ** (1.0 / p))


def l2_norm(f: SampledFunction) -> float:
    return lp_norm(f, 2.0)


def inner(f: SampledFunction, g: SampledFunction) -> complex:
    """L^2 pairing integral f * conj(g) dx on the shared grid."""
    if f.grid.key != g.grid.key:
        raise ValueError("functions live on different grids")
    val = f.grid.integrate(f.values * np.conj(g.values))
    return complex(val)


def hardy_head(f: SampledFunction) -> SampledFunction:
    """Averaging operator (1/x) * integral_0^x f(y) dy at the nodes.

    The unseen [0, x_min] mass is modelled through the x^lam power
    profile: integral_0^{x_min} f ~ f(node_0) x_min / (lam + 1).
    """
    head = float(f.values[0].real * f.grid.x_min / (f.lam + 1.0)) if f.lam > -1 else 0.0
    if np.iscomplexobj(f.values):
        head = complex(f.values[0] * f.grid.x_min / (f.lam + 1.0))
    running = f.grid.cumulative(f.values, head=head)
    return f.with_values(running / f.grid.nodes.reshape((-1,) + (1,) * (f.values.ndim - 1)))


def hardy_tail(f: SampledFunction) -> SampledFunction:
    """Tail operator integral_x^inf f(y)/y dy, truncated at x_max."""
    g = f.values / f.grid.nodes.reshape((-1,) + (1,) * (f.values.ndim - 1))
    total = f.grid.integrate(g)
    running = f.grid.cumulative(g)
    return f.with_values(total - running)
