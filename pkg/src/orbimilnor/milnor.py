"""The Milnor ring of an admissible polynomial as a graded Frobenius algebra."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import HessianError, InfiniteDimensionalError, InputError
from .groebner import GroebnerBasis, buchberger, normal_form, standard_monomials
from .linalg import determinant as mat_determinant
from .orders import MonomialOrder
from .polynomial import Polynomial, hessian, jacobian, mono_mul, mono_str
from .scalars import is_zero
from .structure import WeightVector, compute_weights, is_admissible


@dataclass(frozen=True)
class GradedElement:
    ring: "MilnorRing"
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.ring.mu:
            raise ValueError(f"expected {self.ring.mu} coordinates, got {len(self.coords)}")

    def __add__(self, other):
        return GradedElement(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return GradedElement(self.ring, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c):
        return GradedElement(self.ring, tuple(c * a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, GradedElement):
            return ring_product(self, other)
        return self.scale(other)

    __rmul__ = scale

    def is_zero(self):
        return all(is_zero(a) for a in self.coords)

    def support(self):
        return [i for i, a in enumerate(self.coords) if not is_zero(a)]

    @property
    def degree(self):
        """Doubled degree when homogeneous, None for zero or mixed elements."""
        degs = {self.ring.degrees[i] for i in self.support()}
        return degs.pop() if len(degs) == 1 else None

    def to_polynomial(self):
        return self.ring.to_polynomial(self.coords)

    def __str__(self):
        return str(self.to_polynomial())


class MilnorRing:
    """Q_W = C[x]/(dW), with basis, grading, products and the residue pairing.

    The basis is the set of standard monomials for the weighted degree
    order, listed by increasing weighted degree.  Construction verifies the
    dimension formula and the one-dimensionality of the top degree.
    """

    def __init__(self, W: Polynomial, weights: WeightVector | None = None, check=True):
        self.W = W
        self.variables = W.variables
        n = W.nvars
        if weights is None:
            if n and check:
                adm = is_admissible(W)
                if not adm:
                    if adm.reason.startswith("degenerate"):
                        raise InfiniteDimensionalError(f"{W}: {adm.reason}")
                    raise InputError(f"{W} is not admissible: {adm.reason}")
            weights = compute_weights(W)
        self.weights = weights
        self.order = MonomialOrder.weighted(weights.q) if n else MonomialOrder.grevlex(0)
        if n:
            gens = jacobian(W)
            self.gb = buchberger(gens, self.order)
            basis = standard_monomials(self.gb)
        else:
            self.gb = GroebnerBasis((), self.order, True, ())
            basis = [()]
        if basis is None:
            raise InfiniteDimensionalError(f"Milnor ring of {W} is infinite dimensional")
        self.basis = tuple(basis)
        self.index = {e: i for i, e in enumerate(self.basis)}
        self.mu = len(self.basis)
        self.c_hat = sum((1 - 2 * q for q in weights.q), Fraction(0))
        self.weighted_degrees = tuple(weights.degree(e) for e in self.basis)
        self.degrees = tuple(2 * p for p in self.weighted_degrees)
        self.top_degree = 2 * self.c_hat
        self._products = {}

        self.hessian = hessian(W) if n else Polynomial.constant((), 1)
        hnf = self.normal_form(self.hessian)
        if hnf.is_zero():
            raise HessianError(f"Hessian of {W} reduces to zero in the Milnor ring")
        if len(hnf.terms) != 1:
            raise HessianError(f"Hessian normal form {hnf} of {W} is not a single monomial")
        (hexp, hcoef), = hnf.terms.items()
        self.hessian_monomial = hexp
        self.hessian_coefficient = hcoef
        self.hessian_index = self.index[hexp]
        if check:
            self._check_invariants()

    def _check_invariants(self):
        expected = Fraction(1)
        for q in self.weights.q:
            expected *= 1 / q - 1
        if expected != self.mu:
            raise ArithmeticError(f"dimension {self.mu} differs from prod(1/q_i - 1) = {expected}")
        top = [e for e, d in zip(self.basis, self.degrees) if d == self.top_degree]
        if max(self.degrees) != self.top_degree or top != [self.hessian_monomial]:
            raise ArithmeticError("top-degree piece is not spanned by the Hessian")

    def __repr__(self):
        return f"MilnorRing({self.W}, mu={self.mu})"

    # -- conversions -------------------------------------------------------
    def normal_form(self, p: Polynomial) -> Polynomial:
        if not self.W.nvars:
            return p
        return normal_form(p, self.gb)

    def coords_of(self, p: Polynomial) -> tuple:
        nf = self.normal_form(p)
        coords = [Fraction(0)] * self.mu
        for e, c in nf.terms.items():
            coords[self.index[e]] = c
        return tuple(coords)

    def element(self, p) -> GradedElement:
        """A GradedElement from a polynomial, an exponent tuple or a string."""
        if isinstance(p, str):
            from .polynomial import parse_polynomial

            p = parse_polynomial(p, self.variables)
        if isinstance(p, tuple):
            p = Polynomial.monomial(self.variables, p)
        return GradedElement(self, self.coords_of(p))

    def basis_element(self, i) -> GradedElement:
        return GradedElement(self, tuple(Fraction(int(i == j)) for j in range(self.mu)))

    def unit(self) -> GradedElement:
        return self.element(Polynomial.constant(self.variables, 1))

    def to_polynomial(self, coords) -> Polynomial:
        return Polynomial(self.variables, {e: c for e, c in zip(self.basis, coords)})

    def monomial_str(self, i):
        return mono_str(self.basis[i], self.variables)

    # -- products ----------------------------------------------------------
    def basis_product(self, i, j) -> tuple:
        key = (i, j) if i <= j else (j, i)
        out = self._products.get(key)
        if out is None:
            e = mono_mul(self.basis[i], self.basis[j])
            out = self.coords_of(Polynomial.monomial(self.variables, e))
            self._products[key] = out
        return out

    @cached_property
    def multiplication_table(self):
        return [[self.basis_product(i, j) for j in range(self.mu)] for i in range(self.mu)]

    def product(self, a, b) -> tuple:
        out = [Fraction(0)] * self.mu
        for i, x in enumerate(a):
            if is_zero(x):
                continue
            for j, y in enumerate(b):
                if is_zero(y):
                    continue
                xy = x * y
                for k, z in enumerate(self.basis_product(i, j)):
                    if not is_zero(z):
                        out[k] = out[k] + xy * z
        return tuple(out)

    def pairing(self, a, b):
        """<a, b> = mu * (Hessian coefficient of ab) / (Hessian normal-form coefficient)."""
        top = self.product(a, b)[self.hessian_index]
        return self.mu * top / self.hessian_coefficient

    @cached_property
    def pairing_matrix(self):
        unit = [[Fraction(int(i == j)) for j in range(self.mu)] for i in range(self.mu)]
        return [[self.pairing(unit[i], unit[j]) for j in range(self.mu)] for i in range(self.mu)]

    def hessian_normal_form(self):
        return self.hessian_coefficient, self.hessian_monomial


def milnor_ring(W: Polynomial) -> MilnorRing:
    return MilnorRing(W)


def monomial_degree(exp, ring: MilnorRing) -> Fraction:
    """Doubled degree 2 * sum(a_i q_i)."""
    return 2 * ring.weights.degree(exp)


def weighted_degree(exp, ring: MilnorRing) -> Fraction:
    return ring.weights.degree(exp)


def hessian_normal_form(ring: MilnorRing):
    return ring.hessian_normal_form()


def ring_product(a: GradedElement, b: GradedElement) -> GradedElement:
    if a.ring is not b.ring:
        raise InputError("elements belong to different rings")
    return GradedElement(a.ring, a.ring.product(a.coords, b.coords))


def milnor_pairing(a: GradedElement, b: GradedElement):
    if a.ring is not b.ring:
        raise InputError("elements belong to different rings")
    return a.ring.pairing(a.coords, b.coords)


@dataclass
class AxiomReport:
    """Outcome of an exhaustive axiom check; ``witnesses`` holds the first failure per check."""

    checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def record(self, name, ok, witness=None):
        prev = self.checks.get(name, True)
        self.checks[name] = prev and ok
        if not ok and name not in self.witnesses:
            self.witnesses[name] = witness

    @property
    def ok(self):
        return all(self.checks.values())

    def __bool__(self):
        return self.ok

    def failures(self):
        return [k for k, v in self.checks.items() if not v]


def verify_frobenius(ring: MilnorRing) -> AxiomReport:
    """Exhaustively check the graded Frobenius algebra axioms on the basis."""
    rep = AxiomReport()
    mu = ring.mu
    P = ring.pairing_matrix
    name = ring.monomial_str
    rep.record("unit", ring.unit().coords == ring.basis_element(0).coords and ring.basis[0] == (0,) * ring.W.nvars)
    for i in range(mu):
        for j in range(mu):
            if P[i][j] != P[j][i]:
                rep.record("symmetric", False, (name(i), name(j)))
            if ring.basis_product(i, j) != ring.basis_product(j, i):
                rep.record("commutative", False, (name(i), name(j)))
            nonzero = not is_zero(P[i][j])
            if nonzero and ring.degrees[i] + ring.degrees[j] != ring.top_degree:
                rep.record("pairing-graded", False, (name(i), name(j)))
            prod = ring.basis_product(i, j)
            for k, c in enumerate(prod):
                if not is_zero(c) and ring.degrees[k] != ring.degrees[i] + ring.degrees[j]:
                    rep.record("degree-additive", False, (name(i), name(j)))
                    break
    rep.record("symmetric", True)
    rep.record("commutative", True)
    rep.record("pairing-graded", True)
    rep.record("degree-additive", True)
    det = mat_determinant(P) if mu else Fraction(1)
    rep.record("nondegenerate", not is_zero(det), None if not is_zero(det) else "pairing determinant is 0")
    sparse = [[[(m, c) for m, c in enumerate(ring.basis_product(i, j)) if not is_zero(c)]
               for j in range(mu)] for i in range(mu)]
    for i in range(mu):
        for j in range(mu):
            ij = sparse[i][j]
            for k in range(mu):
                left = sum((c * P[m][k] for m, c in ij), Fraction(0))
                right = sum((c * P[i][m] for m, c in sparse[j][k]), Fraction(0))
                if left != right:
                    rep.record("frobenius", False, (name(i), name(j), name(k)))
    rep.record("frobenius", True)
    return rep
