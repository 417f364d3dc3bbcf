"""Generic-separability normalization of hypersurfaces over F_p and F_p(t).

Truncated multivariate power series, Weierstrass preparation and a driver
that finds coordinate shears and coefficient-field twists making every
factor separable in its first variable.
"""

from .fields import DomainError, FieldDescriptor, FieldElem
from .normalize import (
    Config,
    FieldTwist,
    HypersurfaceInput,
    NormalizationResult,
    Shear,
    TransformationLog,
    certify,
    field_twist,
    run,
    validate,
)
from .series import SeriesRing, TruncatedSeries
from .weierstrass import DistinguishedPoly, WeierstrassFactorization, prepare, reduce_mod, weierstrass_order

__version__ = "0.1.0"

__all__ = [
    "Config",
    "DistinguishedPoly",
    "DomainError",
    "FieldDescriptor",
    "FieldElem",
    "FieldTwist",
    "HypersurfaceInput",
    "NormalizationResult",
    "SeriesRing",
    "Shear",
    "TransformationLog",
    "TruncatedSeries",
    "WeierstrassFactorization",
    "certify",
    "field_twist",
    "prepare",
    "reduce_mod",
    "run",
    "validate",
    "weierstrass_order",
]
