"""Constructions of KCH representations and the checks run on them."""
from .core import (
    CONSTRUCT_TOL,
    SPECTRUM_TOL,
    KCHRep,
    RepReport,
    abelian_rep,
    algebra_span_dimension,
    cord_relation_check,
    direct_sum,
    eval_word,
    induced_aug,
    irreducibility,
    is_verified,
    reduce_rep,
    sl2_twist,
    trivial_rep,
    untwist,
    verify,
)
from .pretzel import phi_k_roots, pretzel_identity_suite, pretzel_rep, pretzel_reps
from .torus import companion_fill, torus_rep, torus_reps, torus_residuals
from .twobridge import riley_polynomial, two_bridge_rep, two_bridge_reps

__all__ = [
    "CONSTRUCT_TOL", "SPECTRUM_TOL", "KCHRep", "RepReport", "abelian_rep", "algebra_span_dimension",
    "cord_relation_check", "direct_sum", "eval_word", "induced_aug", "irreducibility", "is_verified",
    "reduce_rep", "sl2_twist", "trivial_rep", "untwist", "verify", "phi_k_roots", "pretzel_identity_suite",
    "pretzel_rep", "pretzel_reps", "companion_fill", "torus_rep", "torus_reps", "torus_residuals",
    "riley_polynomial", "two_bridge_rep", "two_bridge_reps",
]
