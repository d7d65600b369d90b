"""Property tests over random invertible polynomials and random polynomials."""

from fractions import Fraction

import sympy
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from strategies import atomic_sums, small_polys
from orbimilnor.groebner import buchberger, normal_form
from orbimilnor.milnor import MilnorRing
from orbimilnor.orbifold import BModel
from orbimilnor.orders import MonomialOrder
from orbimilnor.polynomial import Polynomial, jacobian, parse_polynomial
from orbimilnor.scalars import Field
from orbimilnor.structure import classify, compute_weights, exponent_matrix
from orbimilnor.symmetry import (
    GroupElement,
    act_on_monomial,
    invariant_monomials,
    max_symmetry_group,
    sl_subgroup,
    subgroup_generated,
)

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _mu_bounded(W, limit=60):
    mu = Fraction(1)
    for q in compute_weights(W).q:
        mu *= 1 / q - 1
    return mu <= limit


@SETTINGS
@given(atomic_sums())
def test_dimension_formula(data):
    W, _ = data
    assume(_mu_bounded(W))
    R = MilnorRing(W)
    expected = Fraction(1)
    for q in R.weights.q:
        expected *= 1 / q - 1
    assert R.mu == expected
    assert max(R.degrees) == 2 * R.c_hat


@SETTINGS
@given(atomic_sums())
def test_group_order_is_abs_det(data):
    W, _ = data
    det = abs(sympy.Matrix(exponent_matrix(W).tolist()).det())
    G = max_symmetry_group(W)
    assert G.order == det
    J = GroupElement(compute_weights(W).q)
    assert J in G


@SETTINGS
@given(atomic_sums(), st.data())
def test_action_is_a_homomorphism(data, draw):
    W, _ = data
    G = max_symmetry_group(W)
    g = draw.draw(st.sampled_from(G.elements))
    h = draw.draw(st.sampled_from(G.elements))
    exp = tuple(draw.draw(st.integers(0, 4)) for _ in range(W.nvars))
    lhs = act_on_monomial(g + h, exp)
    rhs = (act_on_monomial(g, exp) + act_on_monomial(h, exp)) % 1
    assert lhs == rhs
    assert (g + (-g)).is_zero()


@SETTINGS
@given(atomic_sums(max_vars=2, max_exp=4))
def test_invariants_of_a_subgroup_contain_those_of_the_group(data):
    W, _ = data
    G = max_symmetry_group(W)
    S = sl_subgroup(G)
    R = MilnorRing(W)
    inv_g = set(invariant_monomials(R.basis, G))
    inv_s = set(invariant_monomials(R.basis, S))
    assert inv_g <= inv_s
    # invariants of <g> ∩ invariants of <h> = invariants of <g, h>
    if len(G.generators) >= 2:
        a, b = G.generators[:2]
        A, B = subgroup_generated(W, [a]), subgroup_generated(W, [b])
        AB = subgroup_generated(W, [a, b])
        inv = lambda H: set(invariant_monomials(R.basis, H))
        assert inv(A) & inv(B) == inv(AB)


@SETTINGS
@given(atomic_sums(max_vars=2, coefficients=False), atomic_sums(max_vars=2, coefficients=False))
def test_decoupled_sums_multiply(d1, d2):
    W1, _ = d1
    W2, _ = d2
    assume(_mu_bounded(W1, 20) and _mu_bounded(W2, 20))
    names2 = ("z", "w")[:W2.nvars]
    V2 = Polynomial(names2, dict(W2.terms))
    allv = W1.variables + names2
    W = W1.embed(allv) + V2.embed(allv)
    R, R1, R2 = MilnorRing(W), MilnorRing(W1), MilnorRing(V2)
    assert R.mu == R1.mu * R2.mu
    assert R.c_hat == R1.c_hat + R2.c_hat
    assert R.hessian_coefficient == R1.hessian_coefficient * R2.hessian_coefficient


@SETTINGS
@given(atomic_sums(max_vars=3), st.permutations(range(3)))
def test_weights_follow_variable_permutations(data, perm):
    W, blocks = data
    n = W.nvars
    perm = [p for p in perm if p < n]
    terms = {tuple(e[p] for p in perm): c for e, c in W.terms.items()}
    V = Polynomial(W.variables, terms)
    qW, qV = compute_weights(W).q, compute_weights(V).q
    assert qV == tuple(qW[p] for p in perm)
    assert sorted(classify(V).kinds()) == sorted(k for k, _ in blocks)


@SETTINGS
@given(atomic_sums())
def test_parser_round_trip(data):
    W, _ = data
    assert parse_polynomial(str(W), W.variables) == W


@SETTINGS
@given(small_polys, small_polys, st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_normal_form_is_linear(p, q, c):
    gens = [parse_polynomial("x^3 - y^2", ("x", "y")), parse_polynomial("x*y^2 + y", ("x", "y"))]
    gb = buchberger(gens, MonomialOrder.grevlex(2))
    cp = Polynomial(p.variables, {e: c * v for e, v in p.terms.items()})
    lhs = normal_form(cp + q, gb)
    rhs = normal_form(p, gb)
    rhs = Polynomial(rhs.variables, {e: c * v for e, v in rhs.terms.items()}) + normal_form(q, gb)
    assert lhs == rhs
    # p - NF(p) lies in the ideal: its own normal form is zero
    assert normal_form(p + Polynomial(p.variables, {e: -v for e, v in normal_form(p, gb).terms.items()}),
                       gb).is_zero()


@SETTINGS
@given(atomic_sums(max_vars=2, coefficients=False))
def test_jacobian_ideal_is_proper(data):
    W, _ = data
    gb = buchberger(jacobian(W), MonomialOrder.weighted(compute_weights(W).q))
    assert not gb.is_unit()


FIELD = Field([Fraction(1, 2), 1, 1], "c", strict=True)
scalars = st.builds(lambda a, b: FIELD.embed(a) + FIELD.generator * b,
                    st.fractions(min_value=-4, max_value=4, max_denominator=6),
                    st.fractions(min_value=-4, max_value=4, max_denominator=6))


@SETTINGS
@given(scalars, scalars, scalars)
def test_extension_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if a != 0:
        assert a * a.inverse() == 1


@settings(max_examples=10, deadline=None)
@given(atomic_sums(max_vars=2, max_exp=4, coefficients=False))
def test_sl_models_have_anti_diagonal_pairing(data):
    W, _ = data
    G = sl_subgroup(max_symmetry_group(W))
    assume(MilnorRing(W).mu * G.order <= 60)
    M = BModel(W, G)
    top = 2 * MilnorRing(W).c_hat
    for i, a in enumerate(M.basis):
        for j, b in enumerate(M.basis):
            if M.pairing_basis(i, j) != 0:
                assert a.g == -b.g and M.degrees[i] + M.degrees[j] == top
