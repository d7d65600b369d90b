from fractions import Fraction

import pytest
import sympy

from oracles import to_sympy
from orbimilnor.corpus import CORPUS
from orbimilnor.errors import NonUniqueWeightsError, NotQuasihomogeneousError, WeightMismatchError
from orbimilnor.polynomial import parse_polynomial
from orbimilnor.scalars import Scalar
from orbimilnor.structure import (
    check_same_weights,
    classify,
    compute_weights,
    equivalence_system,
    exponent_matrix,
    is_admissible,
    is_nondegenerate,
    search_linear_equivalence,
    webb_applicable,
)

P = parse_polynomial
F = Fraction


@pytest.mark.parametrize("text, rows", [
    ("x^4+y^4", [[4, 0], [0, 4]]),
    ("x^3*y+x*y^3", [[3, 1], [1, 3]]),
    ("x^2+x*y^3+y^6", [[2, 0], [1, 3], [0, 6]]),
])
def test_exponent_matrix(text, rows):
    assert exponent_matrix(P(text)).tolist() == rows


@pytest.mark.parametrize("text, q", [
    ("x^4+y^4", (F(1, 4), F(1, 4))),
    ("x^2+x*y^3", (F(1, 2), F(1, 6))),
    ("x^7", (F(1, 7),)),
])
def test_weights(text, q):
    w = compute_weights(P(text))
    assert w.q == q and w.unique


def test_weight_errors():
    with pytest.raises(NotQuasihomogeneousError):
        compute_weights(P("x^2+y^3+x*y^2"))
    with pytest.raises(NonUniqueWeightsError):
        compute_weights(P("x^2*y"))


def test_weights_solve_the_exponent_system_on_corpus():
    for text, _ in CORPUS:
        W = P(text)
        q = compute_weights(W).q
        for row in exponent_matrix(W).rows:
            assert sum(a * x for a, x in zip(row, q)) == 1
        assert all(0 < x < 1 for x in q)


@pytest.mark.parametrize("text, expected", [("x^4+y^4", True), ("x^2*y", False), ("x^2+y^6", True)])
def test_nondegeneracy(text, expected):
    assert is_nondegenerate(P(text)) is expected


def test_admissibility_clauses():
    assert is_admissible(P("x^2+x*y^3+y^6"))
    cross = is_admissible(P("x*y"))
    assert not cross and "cross-term" in cross.reason
    degen = is_admissible(P("x^2*y"))
    assert not degen and degen.reason.startswith("degenerate")


def test_classification_examples():
    assert classify(P("x^4+y^4")).kinds() == ["fermat", "fermat"]
    chain = classify(P("x^2+x*y^3"))
    (block,) = chain.blocks
    assert block.kind == "chain" and block.arrangement == (1, 0) and block.exponents == (3, 2)
    nonin = classify(P("x^2+x*y^3+y^6"))
    assert not nonin.invertible and nonin.kinds() == ["noninvertible-block"]


def test_classification_matches_corpus_labels_and_reassembles():
    for text, kinds in CORPUS:
        W = P(text)
        dec = classify(W)
        assert dec.invertible == (len(W.terms) == W.nvars)
        if kinds is not None:
            assert sorted(dec.kinds()) == sorted(kinds)
        total = dec.blocks[0].summand
        for b in dec.blocks[1:]:
            total = total + b.summand
        assert total == W
        covered = sorted(i for b in dec.blocks for i in b.variables)
        assert covered == list(range(W.nvars))


def test_same_weights():
    assert check_same_weights(P("x^4+y^4"), P("x^3*y+x*y^3"))
    assert check_same_weights(P("x^2+y^6"), P("y^2+x^6"))
    assert not check_same_weights(P("x^3"), P("x^4"))


def test_webb_precondition():
    w = webb_applicable(P("x^4+y^4"))
    assert not w.applicable and w.witness == (2, 2)
    assert webb_applicable(P("x^2+y^6"))
    assert webb_applicable(P("x^3+y^3"))


# -- equivalence search ---------------------------------------------------------

def _verify_with_sympy(W1, W2, witness):
    """Expand W2(h(x)) - W1 with sympy, reducing scalars modulo the minimal polynomial."""
    c = sympy.Symbol("c")
    modulus = None
    images = []
    for img in witness.images:
        expr = 0
        for exp, coef in img.terms.items():
            if isinstance(coef, Scalar):
                modulus = sum(sympy.Rational(m.numerator, m.denominator) * c ** k
                              for k, m in enumerate(coef.field.modulus))
                val = sum(sympy.Rational(a.numerator, a.denominator) * c ** k for k, a in enumerate(coef.coeffs))
            else:
                val = sympy.Rational(coef.numerator, coef.denominator)
            term = val
            for v, a in zip(W1.variables, exp):
                term *= sympy.Symbol(v) ** a
            expr += term
        images.append(expr)
    e2, s2 = to_sympy(W2)
    e1, _ = to_sympy(W1)
    diff = sympy.expand(e2.subs(dict(zip(s2, images)), simultaneous=True) - e1)
    if modulus is None:
        return diff == 0
    poly = sympy.Poly(diff, *sympy.symbols(W1.variables))
    return all(sympy.rem(sympy.expand(k), modulus, c) == 0 for k in poly.coeffs())


def test_equivalence_chain_and_fermat_witness():
    W1, W2 = P("x^2+y^6"), P("x^2+x*y^3")
    res = search_linear_equivalence(W1, W2)
    assert res.found
    assert _verify_with_sympy(W1, W2, res.witness)


def test_equivalence_identity():
    W = P("x^3*y+x*y^3")
    res = search_linear_equivalence(W, W)
    assert res.witness.apply(W) == W


def test_equivalence_weight_mismatch():
    with pytest.raises(WeightMismatchError):
        search_linear_equivalence(P("x^4+y^4"), P("x^2+y^6"))


def test_fermat_pair_and_loop_pair_are_equivalent_over_c():
    # the weighted linear system is solvable: sympy's own Groebner basis of the
    # same equations is not {1}, and the returned substitution expands exactly
    W1, W2 = P("x^4+y^4"), P("x^3*y+x*y^3")
    eqs, names, _ = equivalence_system(W1, W2)
    syms = sympy.symbols(names)
    assert list(sympy.groebner([to_sympy(e)[0] for e in eqs], *syms, order="grevlex").exprs) != [1]
    res = search_linear_equivalence(W1, W2)
    assert res.found and not res.unit_certificate
    assert _verify_with_sympy(W1, W2, res.witness)


def test_inequivalent_quartics_give_unit_certificate():
    # binary quartics with different j-invariants (1728 vs 0) share weights (1/4, 1/4)
    W1, W2 = P("x^4+y^4"), P("x^4+x^2*y^2+y^4")
    res = search_linear_equivalence(W1, W2)
    assert not res.found and res.unit_certificate
    eqs, names, _ = equivalence_system(W1, W2)
    syms = sympy.symbols(names)
    assert list(sympy.groebner([to_sympy(e)[0] for e in eqs], *syms, order="grevlex").exprs) == [1]


def test_rescaled_fermat_is_equivalent():
    res = search_linear_equivalence(P("x^4+y^4"), P("x^4+2*y^4"))
    assert res.found and _verify_with_sympy(P("x^4+y^4"), P("x^4+2*y^4"), res.witness)


@pytest.mark.parametrize("pair", [("x^2+y^6", "x^2+x*y^3+y^6"), ("x^3+y^3", "x^3+x*y^2"),
                                  ("x^2+x*y^3", "x^2+x*y^3+y^6")])
def test_webb_oracle_on_equal_weights(pair):
    W1, W2 = P(pair[0]), P(pair[1])
    assert compute_weights(W1).q == compute_weights(W2).q
    assert webb_applicable(W1)
    res = search_linear_equivalence(W1, W2)
    assert res.found and _verify_with_sympy(W1, W2, res.witness)
