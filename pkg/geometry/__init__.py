"""Separation and covering radii of point sets in [0,1)^d."""

from .covering import covering_estimate, covering_upper_bound
from .radii import NormKind, RadiiRecord, origin_separation, separation_exact, separation_scan

__all__ = [
    "covering_estimate",
    "covering_upper_bound",
    "NormKind",
    "RadiiRecord",
    "origin_separation",
    "separation_exact",
    "separation_scan",
]
