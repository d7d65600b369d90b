from fractions import Fraction

import pytest

from oracles import GradedQuotient, hessian_sympy
from orbimilnor.acceptance import REFERENCE_CONSTANTS
from orbimilnor.corpus import example_family
from orbimilnor.errors import InputError, NotWellBehavedError, PreconditionError
from orbimilnor.isomorphism import (
    Constraint,
    FrobeniusMap,
    combine_isomorphisms,
    compare_constant,
    compose,
    diagonal_map,
    extend_isomorphism,
    identity_map,
    inverse,
    is_equivariant,
    same_map,
    solve_binomial_system,
    solve_scaling_iso,
    verify_frobenius_iso,
)
from orbimilnor.milnor import MilnorRing
from orbimilnor.orbifold import BModel
from orbimilnor.polynomial import Polynomial, parse_polynomial
from orbimilnor.scalars import Field, Scalar
from orbimilnor.symmetry import parse_group_elements, subgroup_generated

F = Fraction


def P(text, variables=None):
    return parse_polynomial(text, variables)


def ring(text, variables=None):
    return MilnorRing(P(text, variables))


def group(W, text):
    return subgroup_generated(W, parse_group_elements(text, W.nvars))


def family(n):
    return [ring(t) for t in example_family(n)]


def _hessian_coefficient_by_linear_algebra(R):
    """Top coefficient of the sympy Hessian, reduced by dense graded linear algebra."""
    Q = GradedQuotient(R.W, R.weights.q)
    (coef,) = Q.coordinates(hessian_sympy(R.W), R.basis).values()
    return coef


# -- verification ---------------------------------------------------------------

def test_identity_is_an_isomorphism():
    R = ring("x^3*y+x*y^3")
    assert verify_frobenius_iso(identity_map(R)).ok


def test_scaling_map_with_quartic_root_verifies():
    S, _, T = family(3)
    fld = Field([F(1, 2), 1, 1], "c", strict=True)     # c^2 + c + 1/2 divides c^4 + 1/4
    c = fld.generator
    assert c ** 4 == F(-1, 4)
    f = diagonal_map(S, T, [c ** k for k in range(5)])
    cert = verify_frobenius_iso(f)
    assert cert.ok, cert.failures()


def test_unscaled_map_fails_with_pairing_witness():
    S, _, T = family(3)
    cert = verify_frobenius_iso(diagonal_map(S, T, [1] * 5))
    assert not cert.ok
    assert cert.checks["products"] and not cert.checks["pairings"]
    assert cert.witnesses["pairings"][:2] == ("1", "y^4")


def _swap(R):
    images = [R.coords_of(Polynomial.monomial(R.variables, (e[1], e[0]))) for e in R.basis]
    return FrobeniusMap(R, R, images, "swap")


def test_swap_is_an_isomorphism_but_not_equivariant():
    R = ring("x^4+y^4")
    f = _swap(R)
    assert verify_frobenius_iso(f).ok
    eq = is_equivariant(f, group(R.W, "1/4,0"))
    assert not eq and eq.witness[:3] == ("y", "x", "(1/4,0)")
    assert is_equivariant(f, group(R.W, "1/2,1/2"))


def test_composition_and_inverse():
    S, M, T = family(3)
    f = solve_scaling_iso(S, T).map
    g = inverse(f)
    assert verify_frobenius_iso(g).ok
    assert same_map(compose(f, g), identity_map(S))
    assert same_map(compose(g, f), identity_map(T))
    assert verify_frobenius_iso(compose(identity_map(S), f)).ok
    # c^4 = 3/4 and c^4 = -1/3 live in different extensions
    with pytest.raises(InputError):
        compose(solve_scaling_iso(S, M).map, solve_scaling_iso(M, T).map)


# -- scaling solutions ------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("i, j", [(0, 2), (1, 2), (0, 1), (2, 1)])
def test_scaling_constants_match_hessian_ratio(n, i, j):
    # the pairing <1, y^{2n-2}> forces c^{2n-2} = Hess_target / Hess_source
    rings = family(n)
    sol = solve_scaling_iso(rings[i], rings[j])
    assert sol.found and sol.oracles_agree and sol.certificate.ok
    expected = _hessian_coefficient_by_linear_algebra(rings[j]) / _hessian_coefficient_by_linear_algebra(rings[i])
    assert sol.power((0, 2 * n - 2)) == expected


def test_scaling_constants_for_n3():
    S, M, T = family(3)
    assert solve_scaling_iso(S, T).power((0, 4)) == F(-1, 4)
    assert solve_scaling_iso(M, T).power((0, 4)) == F(-1, 3)


def test_reference_constants_in_diagram_direction():
    # the recorded constants belong to the maps into x^2+xy^n+y^{2n}
    S, M, T = family(3)
    forward = compare_constant(solve_scaling_iso(S, M), (0, 4), REFERENCE_CONSTANTS["phi1"])
    backward = compare_constant(solve_scaling_iso(T, M), (0, 4), REFERENCE_CONSTANTS["phi2"])
    assert forward["agree"] and backward["agree"]


def test_scaling_to_itself_is_identity():
    R = family(3)[0]
    sol = solve_scaling_iso(R, R)
    assert sol.values == [1, 1]
    assert same_map(sol.map, identity_map(R))


def test_no_scaling_between_fermat_and_loop_pair():
    sol = solve_scaling_iso(ring("x^4+y^4"), ring("x^3*y+x*y^3"))
    assert not sol.found and sol.infeasible


def test_constraint_sets_are_recorded():
    S, _, T = family(3)
    sol = solve_scaling_iso(S, T)
    assert any(c.exponents == (0, 4) and c.value == F(-1, 4) for c in sol.pairing_constraints)
    assert sol.product_constraints


# -- binomial systems ------------------------------------------------------------

def test_binomial_rational_solution():
    vals, bad = solve_binomial_system([Constraint((2, 0), F(4)), Constraint((1, 1), F(6))], 2)
    assert bad is None
    assert vals[0] ** 2 == 4 and vals[0] * vals[1] == 6


def test_binomial_needs_extension():
    vals, bad = solve_binomial_system([Constraint((0, 4), F(-1, 4))], 2)
    assert bad is None and isinstance(vals[1], Scalar)
    assert vals[1] ** 4 == F(-1, 4) and vals[0] == 1


def test_binomial_inconsistent():
    vals, bad = solve_binomial_system([Constraint((1, 0), F(2)), Constraint((2, 0), F(3))], 2)
    assert vals is None and bad is not None


# -- extension --------------------------------------------------------------------

def test_extension_over_the_involution():
    S, _, T = family(3)
    sol = solve_scaling_iso(S, T)
    ext = extend_isomorphism(sol.map, group(S.W, "1/2,1/2"))
    assert ext.certificate.ok, ext.certificate.failures()
    assert ext.source_model.dim == ext.target_model.dim == 4
    assert ext.certificate.checks["equivariant"]


def test_extension_over_trivial_group_is_the_map_itself():
    S, M, _ = family(3)
    f = solve_scaling_iso(S, M).map
    ext = extend_isomorphism(f, group(S.W, ""))
    assert ext.psi.images == f.images


def test_extension_rejects_badly_behaved_pair():
    R = ring("x^2*y+y^3")
    with pytest.raises(NotWellBehavedError):
        extend_isomorphism(identity_map(R), group(R.W, "1/2,0"))


def test_extension_rejects_non_isomorphism():
    S, _, T = family(3)
    with pytest.raises(PreconditionError):
        extend_isomorphism(diagonal_map(S, T, [1] * 5), group(S.W, "1/2,1/2"))


# -- tensor combination ---------------------------------------------------------

def test_combining_identities_gives_identity():
    A, B = ring("x^2+y^6"), ring("z^2+w^2", ("z", "w"))
    f = combine_isomorphisms(identity_map(A), identity_map(B))
    assert f.source.mu == 5 and same_map(f, identity_map(f.source))


def test_combined_scaling_map_verifies():
    S, _, T = family(3)
    f = combine_isomorphisms(solve_scaling_iso(S, T).map, identity_map(ring("z^2+w^2", ("z", "w"))))
    assert verify_frobenius_iso(f).ok


def test_combine_and_extend_commute():
    S, _, T = family(3)
    f1 = solve_scaling_iso(S, T).map
    Q = ring("z^2+w^2", ("z", "w"))
    f2 = identity_map(Q)
    e1 = extend_isomorphism(f1, group(S.W, "1/2,1/2")).psi
    e2 = extend_isomorphism(f2, group(Q.W, "1/2,1/2")).psi
    combined_then = combine_isomorphisms(e1, e2)
    f = combine_isomorphisms(f1, f2)
    W = f.source.W
    extended_then = extend_isomorphism(f, group(W, "1/2,1/2,0,0;0,0,1/2,1/2")).psi
    assert isinstance(combined_then.source, BModel)
    assert same_map(combined_then, extended_then)
    assert verify_frobenius_iso(combined_then, combined_then.source.G).ok
