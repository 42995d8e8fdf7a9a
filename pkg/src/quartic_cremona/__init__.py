"""Exact-arithmetic toolkit for determinantal quartic surface pairs.

A 4x4x4 tensor produces two quartic surfaces (determinants of two matrices
of linear forms tied by a bilinear identity), an explicit degree-3 birational
self-map of P^3 carrying one surface onto the other, and the integer-lattice
certificates showing when the pair cannot be matched by a linear change of
coordinates.  Everything is exact: rationals, prime fields, and quadratic
irrationals; no floating point anywhere.
"""

from .certificates import CONDITIONAL, FAIL, PASS, Axiom, Certificate, Step, conclude
from .cremona import (
    RatMap,
    chow_intersect,
    chow_nonlinearity_certificate,
    euler_char_check,
    kernel_map,
    map_degree,
    projective_compose_check,
    pushforward_check,
    transformation_pair,
)
from .determinantal import (
    DeterminantalPair,
    Tensor4,
    bilinear_identity_check,
    bilinear_residual,
    build_M,
    build_N,
    quadric_forms,
    quartic_surfaces,
    random_tensor,
)
from .domains import CoefficientDomain
from .lattice import (
    DiscGroup,
    GramMatrix,
    boundary_rays,
    cremona_obstruction_check,
    disc_action,
    discriminant_group,
    isometries_mapping,
    noether_fano_check,
    projective_obstruction,
    represents_decision,
    smith_normal_form,
)
from .mpoly import MPoly, gradient, parse_poly, poly_compose, poly_divides, variables
from .polygcd import multivariate_gcd
from .polymatrix import PolyMatrix, poly_det
from .quadirr import QuadIrr
from .verify_fp import (
    FpCertificate,
    correspondence_check,
    proj_points,
    rank_profile,
    smooth_check,
    surface_points,
)

__version__ = "0.1.0"
