"""Oriented matroids and hyperfield matroids from triangulations of
products of simplices, via matching fields and sign matrices."""

__version__ = "0.1.0"

from .core import GroundConfig, Matching, Matroid, Report, SignedVector, SignMap, check_3term_gp, check_full_gp, is_chirotope
from .triangulation import MatchingField, TreeSet, extract_matching_field, validate_triangulation
from .oriented import chirotope

__all__ = [
    "GroundConfig",
    "Matching",
    "Matroid",
    "Report",
    "SignedVector",
    "SignMap",
    "check_3term_gp",
    "check_full_gp",
    "is_chirotope",
    "MatchingField",
    "TreeSet",
    "extract_matching_field",
    "validate_triangulation",
    "chirotope",
]
