"""affweyl: combinatorics of extended affine Weyl groups of types A-D.

Admissible sets and their parahoric refinements, sigma-supports, critical
indices, partial conjugation and stratum fiber degrees, plus verdict engines
that check the dimension-zero / discrete-fiber / maximal-dimension /
equi-maximal classification statements on enumerable Coxeter data.
"""

from .cartan import ComponentTables, UnsupportedComponent, build_component
from .kernels import HAVE_COMPILED, active_kernel_name
from .weyl import (
    AffineWeylElement,
    AffineWeylGroup,
    BudgetExceeded,
    standard_group,
)

__all__ = [
    "AffineWeylElement",
    "AffineWeylGroup",
    "BudgetExceeded",
    "ComponentTables",
    "UnsupportedComponent",
    "HAVE_COMPILED",
    "active_kernel_name",
    "build_component",
    "standard_group",
]

__version__ = "0.1.0"
