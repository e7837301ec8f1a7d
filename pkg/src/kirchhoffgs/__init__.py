"""Ground-state normalized solutions of Kirchhoff-type equations.

Computes minimizers of the constrained energy

    J(u) = (a/2)‖∇u‖₂² + (b/4)‖∇u‖₂⁴ + (1/2)∫V(x)u² − ∫G(u),
    ‖u‖₂² = c,  u radial on ℝ³,

over the dilation-stability manifold {P(u) = 0} on a truncated radial
grid, together with the Lagrange multiplier λ and a battery of
verifiable identities (dilation-energy structure, kinetic lower bounds,
sharp interpolation constants, multiplier positivity).
"""

__version__ = "0.1.0"

from .radial import RadialGrid, RadialField, mass, kinetic, lp_integral
from .model import Nonlinearity, ZeroPotential, HardyPotential, GaussianWellPotential
from .functionals import ProblemSpec
from .solver import SolveOptions, SolveResult, minimize_on_pohozaev

__all__ = [
    "__version__",
    "RadialGrid",
    "RadialField",
    "mass",
    "kinetic",
    "lp_integral",
    "Nonlinearity",
    "ZeroPotential",
    "HardyPotential",
    "GaussianWellPotential",
    "ProblemSpec",
    "SolveOptions",
    "SolveResult",
    "minimize_on_pohozaev",
]
