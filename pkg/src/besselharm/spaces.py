"""Finite-dimensional Banach space targets for randomized norm estimates.

A ``FiniteBanachSpace`` is an ell^q norm on C^dim (q = 2 doubles as the
Hilbert-space case, where gamma-norms admit the exact Hilbert-Schmidt
value).  Complex vectors are measured through entrywise moduli, the
standard complexification of the real ell^q norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FiniteBanachSpace", "scalar_space", "ellq_space", "hilbert_space"]


@dataclass(frozen=True)
class FiniteBanachSpace:
    dim: int
    kind: str  # "ellq" or "hilbert"
    q: float = 2.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.kind not in ("ellq", "hilbert"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "hilbert" and self.q != 2.0:
            raise ValueError("hilbert spaces carry q = 2")
        if self.q < 1.0:
            raise ValueError("q must be >= 1")

    @property
    def is_hilbert(self) -> bool:
        return self.kind == "hilbert" or self.q == 2.0

    def norm(self, v: np.ndarray) -> np.ndarray:
        """Norm along the last axis; leading axes broadcast."""
        v = np.asarray(v)
        if v.shape[-1] != self.dim:
            raise ValueError(f"expected last axis {self.dim}, got {v.shape}")
        a = np.abs(v)
        if np.isinf(self.q):
            return a.max(axis=-1)
        if self.q == 2.0:
            return np.sqrt((a * a).sum(axis=-1))
        return (a**self.q).sum(axis=-1) ** (1.0 / self.q)

    def label(self) -> str:
        if self.dim == 1:
            return "scalar"
        if self.is_hilbert:
            return f"ell2({self.dim})"
        return f"ell{self.q:g}({self.dim})"


def scalar_space() -> FiniteBanachSpace:
    return FiniteBanachSpace(dim=1, kind="hilbert")


def ellq_space(dim: int, q: float) -> FiniteBanachSpace:
    return FiniteBanachSpace(dim=dim, kind="ellq", q=float(q))


def hilbert_space(dim: int) -> FiniteBanachSpace:
    return FiniteBanachSpace(dim=dim, kind="hilbert")
