"""besselharm: Hankel-transform harmonic analysis on the half-line.

Numerical toolkit for the Bessel operator on (0, infinity): Hankel
transforms and convolutions, Poisson and heat semigroups, fractional
square functions, gamma-radonifying norm estimators, Riesz transforms
and spectral multipliers, together with a certification harness that
exercises the package's defining identities at desk scale.
"""

from .grids import RadialGrid, TimeGrid, make_radial_grid, make_time_grid

__version__ = "0.1.0"

__all__ = [
    "RadialGrid",
    "TimeGrid",
    "make_radial_grid",
    "make_time_grid",
    "ExperimentRecipe",
    "run_recipe",
    "list_recipes",
    "__version__",
]


def __getattr__(name):
    # recipes pull in every compute module; keep bare imports light
    if name in ("ExperimentRecipe", "run_recipe", "list_recipes"):
        from . import recipes

        return getattr(recipes, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
