"""Hybrid finite-difference/finite-volume methods for hyperbolic conservation laws.

The package evolves paired cell-averaged and face-nodal unknowns: averages
advance by exact face fluxes (conservative), face values by high-order
one-sided mixed-data derivative operators (accurate), giving schemes one
order above the operator's design order.  Submodules:

- ddo: operator catalog, order analysis, pointwise application
- stability: von Neumann symbols, error diagnostics, Courant limits
- time_integration: explicit Runge-Kutta steppers (orders 1-5)
- physics: advection, non-convex scalar, 1D/2D Euler flux models
- solver1d / solver2d: the semi-discretizations and time marching
- fvm: MUSCL-Roe finite-volume baseline for comparisons
- problems / harness: benchmark registry, error metrics, studies
- cli: the `fdfv` command
"""

from . import ddo, fvm, harness, physics, problems, solver1d, solver2d, stability
from . import time_integration

__all__ = [
    "ddo",
    "fvm",
    "harness",
    "physics",
    "problems",
    "solver1d",
    "solver2d",
    "stability",
    "time_integration",
]

__version__ = "0.1.0"
