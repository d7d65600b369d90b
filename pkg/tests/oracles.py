"""Independent reference computations used by the tests.

None of these touch the package's Groebner engine or its linear algebra:
sympy does the heavy lifting, or the answer is enumerated by brute force.
"""

import itertools
from fractions import Fraction

import sympy

from orbimilnor.polynomial import Polynomial


def to_sympy(p: Polynomial):
    syms = sympy.symbols(p.variables) if p.variables else ()
    if len(p.variables) == 1:
        syms = (syms,) if not isinstance(syms, tuple) else syms
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, a in zip(syms, exp):
            term *= s ** a
        expr += term
    return expr, tuple(syms)


def from_sympy(expr, variables):
    syms = sympy.symbols(variables)
    if len(variables) == 1:
        syms = (syms,)
    poly = sympy.Poly(expr, *syms)
    terms = {}
    for exp, c in poly.terms():
        terms[tuple(exp)] = Fraction(int(c.p), int(c.q))
    return Polynomial(variables, terms)


def sympy_reduced_gb(polys, order):
    """Reduced monic Groebner basis from sympy, as a set of term dicts."""
    variables = polys[0].variables
    exprs = [to_sympy(p)[0] for p in polys]
    syms = sympy.symbols(variables)
    if len(variables) == 1:
        syms = (syms,)
    G = sympy.groebner(exprs, *syms, order=order)
    return {_monic(from_sympy(g.as_expr(), variables), order) for g in G.exprs}


def _monic(p, order):
    key = (lambda e: e) if order == "lex" else (lambda e: (sum(e), tuple(-a for a in reversed(e))))
    lead = max(p.terms, key=key)
    c = p.terms[lead]
    return frozenset((e, v / c) for e, v in p.terms.items())


def monic_set(gb_polys, order):
    return {_monic(p, order) for p in gb_polys}


# ---------------------------------------------------------------------------
# graded quotient by dense linear algebra
# ---------------------------------------------------------------------------


def monomials_of_degree(q, d):
    """Exponent tuples with sum a_i q_i == d."""
    n = len(q)
    out = []

    def rec(i, prefix, rest):
        if i == n:
            if rest == 0:
                out.append(tuple(prefix))
            return
        a = 0
        while a * q[i] <= rest:
            rec(i + 1, prefix + [a], rest - a * q[i])
            a += 1

    rec(0, [], d)
    return out


def _jacobian(W):
    return [W.derivative(i) for i in range(W.nvars)]


def _weighted_degree(q, e):
    return sum((Fraction(a) * w for a, w in zip(e, q)), Fraction(0))


class GradedQuotient:
    """Q_W = C[x]/(dW) degree by degree, using only the grading and sympy matrices."""

    def __init__(self, W, q):
        self.W = W
        self.q = tuple(Fraction(x) for x in q)
        self.jac = [d for d in _jacobian(W) if not d.is_zero()]
        self.jac_deg = [_weighted_degree(self.q, next(iter(d.terms))) for d in self.jac]
        self._cache = {}

    def piece(self, d):
        """(monomials of degree d, sympy matrix whose columns span J_d)."""
        if d in self._cache:
            return self._cache[d]
        monos = monomials_of_degree(self.q, d)
        index = {m: i for i, m in enumerate(monos)}
        cols = []
        for g, dg in zip(self.jac, self.jac_deg):
            if dg > d:
                continue
            for m in monomials_of_degree(self.q, d - dg):
                col = [0] * len(monos)
                for e, c in g.terms.items():
                    col[index[tuple(a + b for a, b in zip(e, m))]] += sympy.Rational(c.numerator, c.denominator)
                cols.append(col)
        J = sympy.Matrix(len(monos), len(cols), lambda i, j: cols[j][i]) if cols else sympy.zeros(len(monos), 0)
        self._cache[d] = (monos, J)
        return monos, J

    def dim(self, d):
        monos, J = self.piece(d)
        return len(monos) - (J.rank() if J.shape[1] else 0)

    def degrees(self):
        """All weighted degrees up to 2 * c_hat + 1 that carry monomials."""
        top = sum((1 - 2 * x for x in self.q), Fraction(0))
        bound = 2 * top + 1
        steps = set()
        for e in itertools.product(*(range(int(bound / x) + 1) for x in self.q)):
            d = _weighted_degree(self.q, e)
            if d <= bound:
                steps.add(d)
        return sorted(steps), top

    def total_dimension(self):
        degs, _ = self.degrees()
        return sum(self.dim(d) for d in degs)

    def coordinates(self, poly, basis):
        """Coordinates of a homogeneous ``poly`` along the given basis monomials of its degree."""
        if poly.is_zero():
            return {}
        d = _weighted_degree(self.q, next(iter(poly.terms)))
        monos, J = self.piece(d)
        idx = {m: i for i, m in enumerate(monos)}
        here = [b for b in basis if _weighted_degree(self.q, b) == d]
        B = sympy.Matrix(len(monos), len(here), lambda i, j: 1 if monos[i] == here[j] else 0)
        M = B.row_join(J) if J.shape[1] else B
        rhs = sympy.zeros(len(monos), 1)
        for e, c in poly.terms.items():
            rhs[idx[e]] = sympy.Rational(c.numerator, c.denominator)
        sol, params = M.gauss_jordan_solve(rhs)
        sol = sol.subs({p: 0 for p in params})
        return {b: Fraction(int(sympy.fraction(sol[j])[0]), int(sympy.fraction(sol[j])[1]))
                for j, b in enumerate(here) if sol[j] != 0}


def hessian_sympy(W):
    expr, syms = to_sympy(W)
    if not syms:
        return Polynomial((), {(): 1})
    H = sympy.hessian(expr, syms).det()
    return from_sympy(sympy.expand(H), W.variables)


# ---------------------------------------------------------------------------
# groups by enumeration
# ---------------------------------------------------------------------------


def brute_force_group(W, limit=200_000):
    """All phase vectors g in [0,1)^n with A g integral, or None if the search is too big."""
    A = [list(e) for e in W.terms]
    n = W.nvars
    D = None
    for rows in itertools.combinations(A, n):
        det = sympy.Matrix(rows).det()
        if det != 0:
            D = abs(int(det))
            break
    if D is None or D ** n > limit:
        return None
    found = set()
    for ks in itertools.product(range(D), repeat=n):
        g = tuple(Fraction(k, D) for k in ks)
        if all(sum(a * x for a, x in zip(row, g)).denominator == 1 for row in A):
            found.add(g)
    return found
