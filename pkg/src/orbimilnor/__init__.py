"""Exact computations with Milnor rings and orbifolded B-models.

The toolkit works over Q and simple algebraic extensions of Q, with its own
Groebner basis engine.  Typical use::

    from orbimilnor import parse_polynomial, MilnorRing
    R = MilnorRing(parse_polynomial("x^4+y^4"))
"""

__version__ = "0.1.0"

from .errors import OrbimilnorError
from .isomorphism import (
    FrobeniusMap,
    combine_isomorphisms,
    extend_isomorphism,
    is_equivariant,
    solve_scaling_iso,
    verify_frobenius_iso,
)
from .milnor import MilnorRing, verify_frobenius
from .orbifold import BModel, Conventions, verify_bmodel_axioms
from .polynomial import Polynomial, parse_polynomial
from .scalars import Field, Scalar
from .structure import classify, compute_weights, is_admissible, search_linear_equivalence, webb_applicable
from .symmetry import (
    GroupElement,
    is_well_behaved,
    max_symmetry_group,
    parse_group_elements,
    sl_subgroup,
    subgroup_generated,
)

__all__ = [
    "BModel", "Conventions", "Field", "FrobeniusMap", "GroupElement", "MilnorRing",
    "OrbimilnorError", "Polynomial", "Scalar", "classify", "combine_isomorphisms",
    "compute_weights", "extend_isomorphism", "is_admissible", "is_equivariant",
    "is_well_behaved", "max_symmetry_group", "parse_group_elements", "parse_polynomial",
    "search_linear_equivalence", "sl_subgroup", "solve_scaling_iso", "subgroup_generated",
    "verify_bmodel_axioms", "verify_frobenius", "verify_frobenius_iso", "webb_applicable",
]
