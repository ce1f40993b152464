"""reldiff: a numerical laboratory for relativistic diffusions.

Simulates stochastic flows on orthonormal frame bundles of Lorentzian
manifolds (Minkowski and Robertson-Walker spacetimes), estimates hitting
densities on spacelike hypersurfaces, and runs a registry of quantitative
verification experiments behind a small CLI.
"""

__version__ = "0.1.0"
