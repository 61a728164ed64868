"""Exact and numerical tools for invariant trilinear forms on spheres.

The normalized family of trilinear forms for the conformal group of
S^(n-1) is evaluated on the K-invariant polynomials ``p_a``; its zero set,
poles, Monte Carlo validation and the covariant bi-differential operators
that arise on the planes ``sum(lambda) = -rho - 2k`` are all exposed here.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .bidiff import BidiffSystem, NullspaceResult, build_system, nullspace
from .errors import (
    DimensionTooSmall,
    DivergentRegion,
    DomainError,
    FormulaMismatch,
    IsAPole,
    ParseError,
    PoleOfGamma,
    TriformError,
)
from .exact_arith import QComplex, parse_rational, pochhammer_exact, progression_index
from .params import (
    ParamPoint,
    PoleClass,
    classify_pole,
    from_alpha,
    from_floats,
    from_lambda,
    in_Zk,
    in_zero_set,
    is_irreducible,
)
from .quadrature import McEstimate, mc_invariance, mc_kernel
from .specfun import gamma, log_gamma, pochhammer_f, recip_gamma
from .trilinear import (
    MultiIndex,
    eval_normalized,
    find_witness,
    is_exact_zero,
    multi_indices,
    unnormalized_br,
)

__all__ = [
    "__version__",
    "BidiffSystem",
    "NullspaceResult",
    "build_system",
    "nullspace",
    "DimensionTooSmall",
    "DivergentRegion",
    "DomainError",
    "FormulaMismatch",
    "IsAPole",
    "ParseError",
    "PoleOfGamma",
    "TriformError",
    "QComplex",
    "parse_rational",
    "pochhammer_exact",
    "progression_index",
    "ParamPoint",
    "PoleClass",
    "classify_pole",
    "from_alpha",
    "from_floats",
    "from_lambda",
    "in_Zk",
    "in_zero_set",
    "is_irreducible",
    "McEstimate",
    "mc_invariance",
    "mc_kernel",
    "gamma",
    "log_gamma",
    "pochhammer_f",
    "recip_gamma",
    "MultiIndex",
    "eval_normalized",
    "find_witness",
    "is_exact_zero",
    "multi_indices",
    "unnormalized_br",
]
