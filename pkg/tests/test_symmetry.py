from fractions import Fraction

import pytest
import sympy

from oracles import brute_force_group
from orbimilnor.corpus import CORPUS
from orbimilnor.errors import InputError, NotASymmetryError
from orbimilnor.polynomial import parse_polynomial
from orbimilnor.structure import compute_weights, exponent_matrix
from orbimilnor.symmetry import (
    GroupElement,
    act_on_monomial,
    fixed_locus,
    invariant_monomials,
    is_well_behaved,
    max_symmetry_group,
    parse_group_elements,
    sl_subgroup,
    smith_normal_form,
    subgroup_generated,
)

P = parse_polynomial
F = Fraction


def g(*phases):
    return GroupElement(tuple(F(p) for p in phases))


def group(W, text):
    return subgroup_generated(W, parse_group_elements(text, W.nvars))


def test_phase_canonicalization():
    assert g(F(3, 2), F(-1, 4)).phases == (F(1, 2), F(3, 4))
    x = g(F(1, 3), F(1, 2))
    assert (x + (-x)).is_zero()
    assert x.order() == 6


@pytest.mark.parametrize("text, order", [("x^4+y^4", 16), ("x^3*y+x*y^3", 8), ("x^2+y^6", 12)])
def test_max_group_orders(text, order):
    assert max_symmetry_group(P(text)).order == order


def test_max_group_of_fermat_pair_elements():
    G = max_symmetry_group(P("x^4+y^4"))
    assert set(G.elements) == {g(F(a, 4), F(b, 4)) for a in range(4) for b in range(4)}


def test_max_group_agrees_with_enumeration_on_corpus():
    checked = 0
    for text, _ in CORPUS:
        W = P(text)
        brute = brute_force_group(W)
        if brute is None:
            continue
        checked += 1
        assert {e.phases for e in max_symmetry_group(W).elements} == brute
    assert checked >= 15


def test_order_is_abs_det_for_invertible_corpus():
    for text, kinds in CORPUS:
        if kinds is None:
            continue
        W = P(text)
        det = abs(sympy.Matrix(exponent_matrix(W).tolist()).det())
        assert max_symmetry_group(W).order == det


def test_exponent_of_j_is_a_symmetry():
    for text, _ in CORPUS:
        W = P(text)
        J = GroupElement(compute_weights(W).q)
        assert J in max_symmetry_group(W)


def test_smith_normal_form():
    A = [[3, 1], [1, 3]]
    U, D, V = smith_normal_form(A)
    M = sympy.Matrix(U) * sympy.Matrix(A) * sympy.Matrix(V)
    assert M == sympy.Matrix(D)
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    assert D[1][1] % D[0][0] == 0 and abs(D[0][0] * D[1][1]) == 8


def test_sl_subgroups():
    sl = sl_subgroup(max_symmetry_group(P("x^4+y^4")))
    assert sl.order == 4 and g(F(1, 4), F(3, 4)) in sl
    assert g(F(1, 2), F(1, 2)).in_sl()
    assert sl_subgroup(max_symmetry_group(P("x^3"))).order == 1


def test_subgroup_generated_examples():
    W = P("x^2+y^6")
    G = group(W, "1/2,1/2")
    assert set(G.elements) == {g(0, 0), g(F(1, 2), F(1, 2))}
    assert group(W, "").order == 1
    W4 = P("x^2+y^6+z^2+w^2", ("x", "y", "z", "w"))
    assert group(W4, "1/2,1/2,0,0;0,0,1/2,1/2").order == 4


def test_not_a_symmetry_reports_the_monomial():
    with pytest.raises(NotASymmetryError) as info:
        group(P("x^2+y^6"), "1/3,0")
    assert info.value.details["monomial"] == "x^2"


def test_group_text_errors():
    with pytest.raises(InputError):
        parse_group_elements("1/2", 2)
    with pytest.raises(InputError):
        parse_group_elements("1/0,0", 2)


def test_fixed_loci():
    assert fixed_locus(g(0, 0)) == (0, 1)
    assert fixed_locus(g(F(1, 2), F(1, 2))) == ()
    assert fixed_locus(g(0, F(1, 2), F(1, 2), 0)) == (0, 3)


def test_action_phases():
    h = g(F(1, 2), F(1, 2))
    assert act_on_monomial(h, (0, 2)) == 0
    assert act_on_monomial(h, (0, 1)) == F(1, 2)
    assert act_on_monomial(g(0, 0), (3, 5)) == 0


def test_restricted_action_convention():
    h = g(F(1, 4), F(3, 4))
    assert act_on_monomial(h, (0, 0), "full") == 0
    assert act_on_monomial(h, (0, 0), "restricted", locus=(0,)) == F(1, 4)


def test_invariant_monomials():
    W = P("x^2+y^6")
    basis = [(0, k) for k in range(5)]
    assert invariant_monomials(basis, group(W, "1/2,1/2")) == [(0, 0), (0, 2), (0, 4)]
    assert invariant_monomials(basis, group(W, "")) == basis
    G = group(W, "1/2,1/2")
    assert invariant_monomials([()], G, embed=lambda e: (0, 0)) == [()]
    # outside SL the unit of the empty ring picks up det(g)
    G2 = group(W, "1/2,0")
    assert invariant_monomials([()], G2, embed=lambda e: (0, 0)) == []


def test_well_behaved_examples():
    W = P("x^2+y^6")
    assert is_well_behaved(W, group(W, "1/2,1/2"))
    W2 = P("x^2*y+y^3")
    bad = is_well_behaved(W2, group(W2, "1/2,0"))
    assert not bad and bad.witness == (g(F(1, 2), 0), (0, 1))
    W4 = P("x^2+y^6+z^2+w^2", ("x", "y", "z", "w"))
    cert = is_well_behaved(W4, group(W4, "1/2,1/2,0,0"))
    assert cert and (0, 1) in cert.blocks


def test_well_behaved_merges_components_when_needed():
    # (1/2,1/2) is not a sum of elements supported on {x} and {y} separately
    W = P("x^2+y^6")
    cert = is_well_behaved(W, group(W, "1/2,1/2"))
    assert cert.blocks == ((0, 1),)
