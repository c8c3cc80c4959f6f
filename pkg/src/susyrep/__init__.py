"""Off-shell representations of N-extended 1D supersymmetry.

Garden Algebra matrix tuples, their adinkras, the BC_4 enumeration with
quartet structure, dimensional reduction of 4D multiplets, and numerical
recovery of representations by least squares.
"""

from .garden import (
    DEFAULT_TOL,
    GammaHatSet,
    GardenRep,
    NotSignedPermutation,
    build_gamma_hats,
    clifford_check,
    decompose_sp,
    garden_residual,
    is_garden_rep,
)
from .kernels import BACKEND
from .signed_perm import (
    Permutation,
    SignedPermutation,
    compose,
    inverse,
    parse_cycles,
    quartet_of,
    star,
    star_quartet,
    to_cycles,
    to_matrix,
)

__version__ = "0.1.0"
