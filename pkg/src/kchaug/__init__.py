"""Knot contact homology in degree zero: ideals from braids, KCH representations
of knot groups, and numerical sampling of the augmentation curve."""
from .augment import AugAssignment, is_augmentation, solve_augmentations
from .braid import BraidWord, ideal_generators, phi_letter
from .curve import CurvePoint, consistency_check, normalize, sample_curve
from .laurent import LaurentPoly
from .ncpoly import NcPoly, parse_laurent, parse_ncpoly, substitute

__version__ = "0.1.0"

__all__ = [
    "AugAssignment", "BraidWord", "CurvePoint", "LaurentPoly", "NcPoly", "consistency_check",
    "ideal_generators", "is_augmentation", "normalize", "parse_laurent", "parse_ncpoly", "phi_letter",
    "sample_curve", "solve_augmentations", "substitute",
]
