"""Restricted sumsets 2^A = {a + b : a, b in A, a != b} in Z_p^r and the minimum rho(G, m)."""
from .group_core import GroupElement, Modulus, Subgroup, UsageError, all_subgroups
from .setops import PointSet, canonical_form, restricted_sumset, sumset

__version__ = "0.1.0"

__all__ = [
    "GroupElement",
    "Modulus",
    "PointSet",
    "Subgroup",
    "UsageError",
    "all_subgroups",
    "canonical_form",
    "restricted_sumset",
    "sumset",
]
