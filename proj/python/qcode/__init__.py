"""Classification of linear codes over small prime fields."""

from ._core import (
    Code,
    DerivedBounds,
    InvariantError,
    ResourceError,
    UsageError,
    canonical_certificate,
    classify_k1,
    classify_k2,
    covering_radius,
    covers_at_least,
    derive_bounds,
    equivalent,
    extend,
    load_db,
    parse_db,
    verify_db,
)

__all__ = [
    "Code",
    "DerivedBounds",
    "InvariantError",
    "ResourceError",
    "UsageError",
    "canonical_certificate",
    "classify_k1",
    "classify_k2",
    "covering_radius",
    "covers_at_least",
    "derive_bounds",
    "equivalent",
    "extend",
    "load_db",
    "parse_db",
    "verify_db",
]
