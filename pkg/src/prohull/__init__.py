"""Extremal functions and hull-membership evidence for sampled compacta in P^n.

The package computes degree-truncated extremal brackets (and the derived
best-constant / radius functions) for finite point clouds on complex
projective space, scans and classifies membership evidence fields, verifies
the dual Green-current picture on P^1 at desk scale, and exposes the graded
point-evaluation norm ladder.  All results are certified two-sided brackets
of the discretized problems, never claims about continuum limits.
"""

from .polycore import (
    AffinePolynomial,
    HomogeneousPolynomial,
    affine_section_norm,
    coeff_l1_norm,
    enumerate_monomials,
    extract_degree_component,
    fs_section_norm,
    polydisk_sup_lower,
    veronese_power,
)
from .compacta import (
    CurveGenerator,
    ProjectivePoint,
    SampledCompactum,
    apply_unitary,
    homogeneous_lift,
    sample,
)
from .optimizer import BracketedValue, ModulusProgram, solve_lp, solve_modulus_program
from .extremal import (
    ExtremalResult,
    affine_extremal,
    best_constant,
    extremal_profile,
    radius,
    truncated_extremal,
    veronese_consistency,
)
from .scanner import ScanField, classify, harmonicity_residual, scan
from .jensen import DiscreteSurface, GreenProblem, duality_check, solve_green, weak_inequality_check
from .spectrum import GradedAlgebraOnK, GradedHom, gelfand_norm_check, hom_norm, stability_probe, triple_norm
from . import families

__version__ = "0.1.0"
