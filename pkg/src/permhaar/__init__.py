"""Moments of entry-permuted powers of Haar unitary matrices.

Exact finite-N expectations through the Weingarten pairing expansion,
Monte Carlo estimates, free-probability limits, and finite-N statistics
for the sufficient conditions on permutation families.
"""

from .exact import exact_moment
from .limits import predicted_limit
from .montecarlo import estimate_moment
from .permutations import identity_map, mixing_map, partial_transpose
from .words import Letter, PermRef, WordSpec, parse_word

__all__ = [
    "Letter",
    "PermRef",
    "WordSpec",
    "estimate_moment",
    "exact_moment",
    "identity_map",
    "mixing_map",
    "parse_word",
    "partial_transpose",
    "predicted_limit",
]
