"""Explicit constants for the least prime in an arithmetic progression.

Modules: digamma and Delta (specfun), the Fejer-type kernel (kernel), Turan
power sums (powersum), repulsion constants (repulsion), the smoothing weight
and its Laplace transform (weights), and case feasibility checks (casesearch).
"""

from .errors import (
    ConfigError,
    DomainError,
    NoFeasiblePoint,
    SingularityError,
    TheoremViolation,
)
from .repulsion import dh_constant, dh_constant_real, optimize_c
from .specfun import delta, digamma

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "NoFeasiblePoint",
    "SingularityError",
    "TheoremViolation",
    "delta",
    "dh_constant",
    "dh_constant_real",
    "digamma",
    "optimize_c",
]
