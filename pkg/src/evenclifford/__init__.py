"""Even Clifford algebras of ternary quadratic forms over small commutative rings.

Structure constants are exact (integers, rationals, residue rings, dual
numbers); finite-field classification is exhaustive.
"""

from .azumaya import (
    center,
    find_non_specialized,
    gl_act_algebra,
    is_azumaya,
    realize_as_c0,
    recover_bilinear,
    semiregular_azumaya_agree,
)
from .classify import (
    automorphism_group,
    find_isomorphisms,
    orbit_partition,
    verify_bijection,
    verify_exact_rows,
    witt_partition,
)
from .clifford import (
    AlgebraMap,
    AlgebraStructure4,
    CliffordElement,
    c0_of_similarity,
    clifford_product,
    even_clifford_structure,
    is_algebra_iso,
    lift_section,
    opposite,
    scaling_iso,
    transfer_to_lambda2,
    upsilon,
)
from .errors import *  # noqa: F401,F403
from .quadform import (
    BilinearForm3,
    DiscriminantTwist,
    QuadraticForm3,
    Similarity,
    default_lift,
    half_discriminant,
    induced_quadratic,
    is_semiregular,
    orbit_equivalent,
    polar_bilinear,
    twist,
)
from .ring import QQ, ZZ, parse_ring, prime_field

__version__ = "0.1.0"
