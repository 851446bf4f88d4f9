"""Small generators for S-unit groups of division algebras.

Two halves: an arbitrary-precision engine that evaluates the explicit
geometry-of-numbers height bounds for any central simple division algebra
shape, and an exact-arithmetic verification suite for Hamilton's quaternions
over the rationals (unit group, norm-class generating sets, the action on
products of (p+1)-regular lattice trees, and a two-generator presentation).
"""

from .bounds import AlgebraShape, BoundReport, bound_report
from .enumeration import elements_of_norm, generating_set, unit_group_report, units
from .errors import VerificationError
from .quaternion import (
    HurwitzElement,
    RatQuaternion,
    SPlaceSet,
    content_valuation,
    height,
    is_s_unit,
    order_index,
    parse_quaternion,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraShape",
    "BoundReport",
    "bound_report",
    "HurwitzElement",
    "RatQuaternion",
    "SPlaceSet",
    "VerificationError",
    "content_valuation",
    "elements_of_norm",
    "generating_set",
    "height",
    "is_s_unit",
    "order_index",
    "parse_quaternion",
    "unit_group_report",
    "units",
    "__version__",
]
