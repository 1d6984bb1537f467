"""Exact linear and homological algebra over GF(2)."""

from .complex import (
    BoundarySquareError,
    ChainComplex,
    ChainMap,
    ChainMapCheck,
    ComplexError,
    Homology,
    ShapeError,
    homology,
    induced_map,
    sub_and_quotient,
    verify_chain_map,
)
from .matrix import Gf2Matrix, Reducer, block_matrix, inverse, kernel_basis, rank_of, solve
from .sequences import Cone, LongExactSequence, Term, connecting_map, les_of_pair, les_of_short_exact, mapping_cone
from .spectral import FilteredComplex, FiltrationError, SpectralSequence, check_convergence, spectral_sequence

__all__ = [
    "BoundarySquareError",
    "ChainComplex",
    "ChainMap",
    "ChainMapCheck",
    "ComplexError",
    "Cone",
    "FilteredComplex",
    "FiltrationError",
    "Gf2Matrix",
    "Homology",
    "LongExactSequence",
    "Reducer",
    "ShapeError",
    "SpectralSequence",
    "Term",
    "block_matrix",
    "check_convergence",
    "connecting_map",
    "homology",
    "induced_map",
    "inverse",
    "kernel_basis",
    "les_of_pair",
    "les_of_short_exact",
    "mapping_cone",
    "rank_of",
    "solve",
    "spectral_sequence",
    "sub_and_quotient",
    "verify_chain_map",
]
