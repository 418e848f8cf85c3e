"""Certified lower bounds for plank covers of convex polytopes."""

from .bounds import (CertReport, certify_cover_bound, lemma4_bound_check, min_chord_width_ratio,
                     ratio_closed_form, sharp_witness, tangent_construction, theorem_bound)
from .geometry import (Polytope, SymmetricBody, difference_body, min_width, support,
                       width_in_direction)
from .john import Ellipsoid, JohnNormalization, john_normalize, mvee, verify_john
from .lp import LpProblem, LpSolution, chord_length, membership, radial, solve_lp
from .planks import (CoverVerdict, Plank, VerifyConfig, bang_functional, covers, relative_width,
                     slab_cover, total_relative_width, transform_plank)

__version__ = "0.1.0"

__all__ = [
    "CertReport", "CoverVerdict", "Ellipsoid", "JohnNormalization", "LpProblem", "LpSolution",
    "Plank", "Polytope", "SymmetricBody", "VerifyConfig", "bang_functional", "certify_cover_bound",
    "chord_length", "covers", "difference_body", "john_normalize", "lemma4_bound_check",
    "membership", "min_chord_width_ratio", "min_width", "mvee", "radial", "ratio_closed_form",
    "relative_width", "sharp_witness", "slab_cover", "solve_lp", "support", "tangent_construction",
    "theorem_bound", "total_relative_width", "transform_plank", "verify_john", "width_in_direction",
]
