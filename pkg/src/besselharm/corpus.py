"""Reference function family used across tests and experiments.

Members have the form  f(x) = x^lam * q(x^2) * exp(-x^2/2)  with a
low-degree polynomial q.  The family is closed under the Hankel
transform of order lam - 1/2: expanding q in generalized Laguerre
polynomials L_n^(lam-1/2) turns the transform into the diagonal map
c_n -> (-1)^n c_n, which gives every member an exact transform oracle.
Member 0 is the fixed point q = 1.

Seminorms sup_x x^m |((1/x) d/dx)^k (x^-lam f)| are evaluated
semi-analytically from the stored coefficients: in the variable
u = x^2 the ring derivative (1/x) d/dx acts as 2 d/du, and each
d/du step maps q -> q' - q/2 against the Gaussian factor.
"""

from __future__ import annotations

import math

import numpy as np

from .functions import SampledFunction
from .grids import RadialGrid

__all__ = [
    "gauss_poly_member",
    "make_test_corpus",
    "corpus_hankel_exact",
    "seminorm_eta",
    "lambda_moment_exact",
    "zero_moment_window",
]


def _eval_gauss_poly(x: np.ndarray, lam: float, coeffs: tuple[float, ...]) -> np.ndarray:
    u = x * x
    q = np.polynomial.polynomial.polyval(u, np.asarray(coeffs))
    return x**lam * q * np.exp(-u / 2.0)


def gauss_poly_member(
    grid: RadialGrid, lam: float, coeffs: tuple[float, ...], label: str = ""
) -> SampledFunction:
    values = _eval_gauss_poly(grid.nodes, lam, coeffs)
    meta = {"kind": "gauss-poly", "coeffs": tuple(float(c) for c in coeffs)}
    if label:
        meta["label"] = label
    return SampledFunction(grid=grid, values=values, lam=lam, meta=meta)


def make_test_corpus(
    grid: RadialGrid, lam: float, n_members: int = 10, seed: int = 7
) -> list[SampledFunction]:
    """Member 0 is the pure Gaussian profile; the rest carry random
    polynomials with coefficients drawn from a counter-based stream so
    the corpus is reproducible across platforms."""
    members = [gauss_poly_member(grid, lam, (1.0,), label="gauss0")]
    rng = np.random.Generator(np.random.Philox(key=seed))
    for j in range(1, n_members):
        deg = 1 + (j - 1) % 4
        raw = rng.uniform(-1.0, 1.0, size=deg)
        coeffs = (1.0,) + tuple(raw[i] / math.factorial(i + 1) for i in range(deg))
        members.append(gauss_poly_member(grid, lam, coeffs, label=f"gp{j}"))
    return members


# ---- exact transform via the Laguerre eigenbasis ---------------------


def _laguerre_power_matrix(deg: int, alpha: float) -> np.ndarray:
    """M[i, n] = coefficient of u^i in L_n^alpha(u), 0 <= i, n <= deg."""
    M = np.zeros((deg + 1, deg + 1))
    for n in range(deg + 1):
        for i in range(n + 1):
            M[i, n] = (
                (-1.0) ** i
                * math.gamma(n + alpha + 1.0)
                / (math.gamma(alpha + i + 1.0) * math.factorial(n - i) * math.factorial(i))
            )
    return M


def corpus_hankel_exact(f: SampledFunction, out_grid: RadialGrid | None = None) -> SampledFunction:
    """Exact Hankel transform of a gauss-poly member, sampled on
    ``out_grid`` (default: the member's own grid)."""
    if f.meta.get("kind") != "gauss-poly":
        raise ValueError("exact transform known only for gauss-poly members")
    coeffs = np.asarray(f.meta["coeffs"])
    alpha = f.lam - 0.5
    deg = coeffs.size - 1
    M = _laguerre_power_matrix(deg, alpha)
    lag = np.linalg.solve(M, coeffs)
    lag *= (-1.0) ** np.arange(deg + 1)
    out_coeffs = tuple(M @ lag)
    grid = out_grid if out_grid is not None else f.grid
    g = gauss_poly_member(grid, f.lam, out_coeffs, label=f.meta.get("label", "") + "^")
    return g


# ---- seminorms and moments ------------------------------------------


def seminorm_eta(f: SampledFunction, m: int, k: int) -> float:
    """sup_x x^m |((1/x) d/dx)^k (x^-lam f)(x)| for gauss-poly members."""
    if f.meta.get("kind") != "gauss-poly":
        raise ValueError("seminorm evaluation needs stored coefficients")
    r = np.asarray(f.meta["coeffs"], dtype=float)
    for _ in range(k):
        dr = np.polynomial.polynomial.polyder(r) if r.size > 1 else np.zeros(1)
        pad = np.zeros(max(dr.size, r.size))
        pad[: dr.size] += dr
        pad[: r.size] -= 0.5 * r
        r = pad
    u = np.linspace(0.0, 200.0, 40001)
    vals = np.abs(np.polynomial.polynomial.polyval(u, r)) * np.exp(-u / 2.0)
    if m > 0:
        vals = vals * u ** (m / 2.0)
    return float(2.0**k * vals.max())


def lambda_moment_exact(f: SampledFunction) -> float:
    """integral_0^inf f(x) x^lam dx, exact for gauss-poly members."""
    if f.meta.get("kind") != "gauss-poly":
        raise ValueError("exact moment needs stored coefficients")
    lam = f.lam
    total = 0.0
    for j, c in enumerate(f.meta["coeffs"]):
        total += c * 0.5 * 2.0 ** (lam + j + 0.5) * math.gamma(lam + j + 0.5)
    return total


def make_band_corpus(
    grid: RadialGrid,
    lam: float,
    n_members: int = 6,
    seed: int = 13,
) -> list[SampledFunction]:
    """Members with log-normal spectral profiles, analytic in log y.

    The window exp(-(log(y/y0))^2 / (2 sigma^2)) vanishes to all orders
    at the spectral origin, which matters for modulus-one symbols that
    are rough at y = 0 (imaginary powers): on the gauss-poly family
    those symbols produce an algebraic x^(-lam-3/2) tail and grid
    truncation dominates any comparison, while these members stay
    rapidly decaying under every such multiplier. Compactly supported
    windows are not smooth enough here: a capped bump has Gevrey-2
    edges and its transform only decays like exp(-c sqrt(x)).
    """
    from .hankel import transform_matrix

    rng = np.random.Generator(np.random.Philox(key=seed))
    K = transform_matrix(lam, grid, grid)
    logy = np.log(grid.nodes)
    members = []
    for j in range(n_members):
        y0 = float(rng.uniform(1.5, 3.0))
        sigma = float(rng.uniform(0.40, 0.55))
        k = float(rng.uniform(0.5, 3.0))
        ph = float(rng.uniform(0.0, 2.0 * math.pi))
        amp = float(rng.uniform(0.2, 0.5))
        s = (logy - math.log(y0)) / sigma
        prof = np.exp(-0.5 * s * s) * (1.0 + amp * np.sin(k * logy + ph))
        members.append(
            SampledFunction(
                grid=grid,
                values=K @ prof,
                lam=lam,
                meta={"label": f"band{j}", "kind": "band", "window": (y0, sigma)},
            )
        )
    return members


def zero_moment_window(grid: RadialGrid, lam: float, seed: int = 11) -> SampledFunction:
    """Window psi in the gauss-poly class with vanishing lam-moment, so
    its transform vanishes at the spectral origin."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    a = float(rng.uniform(0.3, 0.9))
    base = (1.0, a)
    moment = sum(
        c * 0.5 * 2.0 ** (lam + j + 0.5) * math.gamma(lam + j + 0.5) for j, c in enumerate(base)
    )
    gauss_moment = 0.5 * 2.0 ** (lam + 0.5) * math.gamma(lam + 0.5)
    shift = moment / gauss_moment
    coeffs = (base[0] - shift, base[1])
    psi = gauss_poly_member(grid, lam, coeffs, label="psi0m")
    psi.meta["zero_moment"] = True
    return psi
