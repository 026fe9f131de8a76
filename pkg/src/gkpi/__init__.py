"""Exact growth, word reduction and polynomial-identity tools for matrix algebras."""

from .growth import (AlgebraPresentation, GrowthProfile, block_diagonal, is_irreducible,
                     measured_bergman_bound, span_filtration)
from .identities import max_irrep_dim, pi_degree_bound, standard_polynomial_eval
from .linalg import GF, QQ, Field, Matrix, charpoly
from .monomial import MonomialPresentation, classify_growth, count_normal_words
from .reduction import reduce_word, verify_certificate, verify_comb_lemma

__version__ = "0.1.0"

__all__ = [
    "AlgebraPresentation", "GrowthProfile", "block_diagonal", "is_irreducible", "measured_bergman_bound",
    "span_filtration", "max_irrep_dim", "pi_degree_bound", "standard_polynomial_eval", "GF", "QQ", "Field",
    "Matrix", "charpoly", "MonomialPresentation", "classify_growth", "count_normal_words", "reduce_word",
    "verify_certificate", "verify_comb_lemma",
]
