"""Finitely presented graded algebras over the vertex ring and their truncated quotients."""
from ceppa.gradealg.hilbert import hilbert_matrix_predicted, socle_degree
from ceppa.gradealg.presentation import (
    Generator,
    Monomial,
    Presentation,
    Relation,
    b_presentation,
    parse_presentation,
    preprojective_presentation,
)
from ceppa.gradealg.quotient import (
    DEFAULT_BUDGET,
    Element,
    GradedQuotient,
    build_graded,
    center_subspace,
    check_budget,
    commutator_subspace,
    commutator_subspace_all_pairs,
    default_budget,
    free_monomial_counts,
)

__all__ = [
    "DEFAULT_BUDGET",
    "Element",
    "Generator",
    "GradedQuotient",
    "Monomial",
    "Presentation",
    "Relation",
    "b_presentation",
    "build_graded",
    "center_subspace",
    "check_budget",
    "commutator_subspace",
    "commutator_subspace_all_pairs",
    "default_budget",
    "free_monomial_counts",
    "hilbert_matrix_predicted",
    "parse_presentation",
    "preprojective_presentation",
    "socle_degree",
]
