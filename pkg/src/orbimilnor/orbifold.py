"""Orbifolded B-models B[W, G]: sectors, grading, star product and pairing."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DegenerateSectorError,
    GammaNotDivisibleError,
    GroupError,
    InfiniteDimensionalError,
    InputError,
    NotInSLError,
)
from .linalg import determinant as mat_determinant
from .milnor import AxiomReport, MilnorRing
from .polynomial import Polynomial, mono_str
from .scalars import is_zero, scalar_str
from .structure import WeightVector, classify, compute_weights, is_admissible
from .symmetry import (
    GroupElement,
    SymmetryGroup,
    act_on_monomial,
    fixed_locus,
    is_symmetry,
)


def restrict_polynomial(W: Polynomial, locus) -> Polynomial:
    """W with every monomial touching a variable outside ``locus`` removed."""
    return W.restrict(locus)


@dataclass(frozen=True)
class Conventions:
    """Switches for the convention forks of the construction.

    The defaults are the ones the toolkit stands behind; the alternatives
    exist so that verification can be shown to be sensitive to them.
    """

    action: str = "full"          # full | restricted determinant in the sector action
    restriction: str = "kill"     # kill | evaluate-one for variables outside fix(g+h)
    mu_ratio: str = "standard"    # standard | inverted | omitted


DEFAULT_CONVENTIONS = Conventions()


@dataclass(frozen=True)
class SectorElement:
    monomial: tuple               # ambient exponent, zero outside fix(g)
    g: GroupElement

    def label(self, variables):
        return f"[{mono_str(self.monomial, variables)}; {self.g}]"


@dataclass(frozen=True)
class Sector:
    g: GroupElement
    locus: tuple
    W: Polynomial                 # restricted polynomial in the locus variables
    ring: MilnorRing
    invariant: tuple              # indices into ring.basis


@dataclass
class ProductEvaluation:
    left: SectorElement
    right: SectorElement
    target: GroupElement
    fix_condition: bool
    mu_cap: int = None
    mu_sum: int = None
    hess_sum: tuple = None        # (coefficient, ambient exponent) of Hess(W|fix(g+h))
    hess_cap: tuple = None        # (coefficient, ambient exponent) of Hess(W|fix(g) ∩ fix(h))
    gamma: tuple = None           # (coefficient, ambient exponent)
    coords: tuple = None          # over the model basis; None means zero
    leak: tuple = ()              # non-invariant monomials hit by the product

    @property
    def is_zero(self):
        return self.coords is None or all(is_zero(c) for c in self.coords)


class BModel:
    """State space and structure of B[W, G] for G inside SL(W)."""

    def __init__(self, W: Polynomial, G: SymmetryGroup, conventions: Conventions = DEFAULT_CONVENTIONS):
        adm = is_admissible(W)
        if not adm:
            raise InputError(f"{W} is not admissible: {adm.reason}")
        if G.W.variables != W.variables:
            raise GroupError("group and polynomial live on different variables")
        for g in G.generators:
            if is_symmetry(W, g) is not None:
                raise GroupError(f"{g} is not a symmetry of {W}")
            if not g.in_sl():
                raise NotInSLError(f"{g} has determinant phase {g.det_phase}; the group must lie in SL(W)",
                                   element=g.to_str())
        self.W = W
        self.G = G
        self.variables = W.variables
        self.n = W.nvars
        self.conventions = conventions
        self.weights = compute_weights(W)
        self.invertible = classify(W).invertible
        self._rings = {}
        self.sectors = {}
        basis = []
        for g in G.elements:
            sec = self._build_sector(g)
            self.sectors[g] = sec
            for i in sec.invariant:
                basis.append(SectorElement(self._embed(sec.ring.basis[i], sec.locus), g))
        self.basis = tuple(basis)
        self.index = {b: k for k, b in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.degrees = tuple(self.element_degree(b) for b in self.basis)
        self._star = {}

    # -- construction ------------------------------------------------------
    def _embed(self, exp, locus):
        out = [0] * self.n
        for i, a in zip(locus, exp):
            out[i] = a
        return tuple(out)

    def ring_for(self, locus) -> MilnorRing:
        locus = tuple(sorted(locus))
        ring = self._rings.get(locus)
        if ring is None:
            Wr = restrict_polynomial(self.W, locus)
            if locus and Wr.is_zero():
                raise InfiniteDimensionalError(f"restriction of {self.W} to {locus} is zero")
            q = WeightVector(tuple(self.weights.q[i] for i in locus))
            ring = MilnorRing(Wr, weights=q)
            self._rings[locus] = ring
        return ring

    def _build_sector(self, g):
        locus = fixed_locus(g)
        try:
            ring = self.ring_for(locus)
        except InfiniteDimensionalError as exc:
            names = [self.variables[i] for i in locus]
            raise DegenerateSectorError(
                f"restriction of {self.W} to fix({g}) = {{{', '.join(names)}}} is degenerate: {exc}",
                element=g.to_str()) from None
        inv = []
        for k, exp in enumerate(ring.basis):
            full = self._embed(exp, locus)
            if all(act_on_monomial(h, full, self.conventions.action, locus) == 0
                   for h in self.G.generators):
                inv.append(k)
        return Sector(g, locus, ring.W, ring, tuple(inv))

    # -- basic data --------------------------------------------------------
    def label(self, k):
        return self.basis[k].label(self.variables)

    def element_degree(self, e: SectorElement) -> Fraction:
        p = self.weights.degree(e.monomial)
        shift = sum((1 - 2 * q for q, gi in zip(self.weights.q, e.g.phases) if gi != 0), Fraction(0))
        return 2 * p + shift

    def unit_index(self):
        return self.index.get(SectorElement((0,) * self.n, GroupElement.zero(self.n)))

    def basis_vector(self, k):
        return tuple(Fraction(int(k == j)) for j in range(self.dim))

    def element(self, poly, g):
        """Coordinates of the sector element [poly; g] (poly in the ambient variables)."""
        g = g if isinstance(g, GroupElement) else GroupElement(g)
        sec = self.sectors[g]
        if isinstance(poly, str):
            from .polynomial import parse_polynomial

            poly = parse_polynomial(poly, self.variables)
        coords = [Fraction(0)] * self.dim
        local = poly.restrict(sec.locus)
        nf = sec.ring.coords_of(local)
        for k, c in enumerate(nf):
            if is_zero(c):
                continue
            b = SectorElement(self._embed(sec.ring.basis[k], sec.locus), g)
            if b not in self.index:
                raise InputError(f"{mono_str(b.monomial, self.variables)} is not G-invariant in sector {g}")
            coords[self.index[b]] = c
        return tuple(coords)

    # -- product -----------------------------------------------------------
    def _hessian_term(self, locus):
        ring = self.ring_for(locus)
        return ring.hessian_coefficient, self._embed(ring.hessian_monomial, locus)

    def evaluate_product(self, a: SectorElement, b: SectorElement) -> ProductEvaluation:
        g, h = a.g, b.g
        k = g + h
        fg, fh, fk = set(fixed_locus(g)), set(fixed_locus(h)), set(fixed_locus(k))
        ev = ProductEvaluation(a, b, k, fix_condition=(fg | fh | fk) == set(range(self.n)))
        if not ev.fix_condition:
            return ev
        cap = tuple(sorted(fg & fh))
        locus_k = tuple(sorted(fk))
        ring_cap = self.ring_for(cap)
        ring_k = self.ring_for(locus_k)
        ev.mu_cap, ev.mu_sum = ring_cap.mu, ring_k.mu
        ev.hess_sum = self._hessian_term(locus_k)
        ev.hess_cap = self._hessian_term(cap)
        diff = tuple(x - y for x, y in zip(ev.hess_sum[1], ev.hess_cap[1]))
        ratio = {
            "standard": Fraction(ev.mu_cap, ev.mu_sum),
            "inverted": Fraction(ev.mu_sum, ev.mu_cap),
            "omitted": Fraction(1),
        }[self.conventions.mu_ratio]
        coef = ratio * ev.hess_sum[0] / ev.hess_cap[0]
        ev.gamma = (coef, diff)
        if any(d < 0 for d in diff):
            raise GammaNotDivisibleError(
                f"Hessian quotient for {a.label(self.variables)} * {b.label(self.variables)} "
                f"has a negative exponent {diff}", evaluation=ev)
        exp = tuple(x + y + z for x, y, z in zip(a.monomial, b.monomial, diff))
        outside = [i for i in range(self.n) if i not in fk and exp[i]]
        if outside:
            if self.conventions.restriction == "kill":
                return ev
            exp = tuple(0 if i not in fk else e for i, e in enumerate(exp))
        local = Polynomial.monomial(ring_k.variables, tuple(exp[i] for i in locus_k), coef)
        nf = ring_k.coords_of(local)
        coords = [Fraction(0)] * self.dim
        leak = []
        for idx, c in enumerate(nf):
            if is_zero(c):
                continue
            be = SectorElement(self._embed(ring_k.basis[idx], locus_k), k)
            pos = self.index.get(be)
            if pos is None:
                leak.append(be)
            else:
                coords[pos] = c
        ev.coords = tuple(coords)
        ev.leak = tuple(leak)
        return ev

    def star_basis(self, i, j) -> tuple:
        key = (i, j)
        out = self._star.get(key)
        if out is None:
            ev = self.evaluate_product(self.basis[i], self.basis[j])
            out = ev.coords if ev.coords is not None else tuple(Fraction(0) for _ in range(self.dim))
            self._star[key] = out
        return out

    def star(self, u, v) -> tuple:
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(u):
            if is_zero(x):
                continue
            for j, y in enumerate(v):
                if is_zero(y):
                    continue
                xy = x * y
                for k, z in enumerate(self.star_basis(i, j)):
                    if not is_zero(z):
                        out[k] = out[k] + xy * z
        return tuple(out)

    # -- pairing -----------------------------------------------------------
    def pairing_basis(self, i, j):
        a, b = self.basis[i], self.basis[j]
        if a.g != -b.g:
            return Fraction(0)
        sec = self.sectors[a.g]
        ring = sec.ring
        ia = ring.index[tuple(a.monomial[t] for t in sec.locus)]
        ib = ring.index[tuple(b.monomial[t] for t in sec.locus)]
        return ring.pairing_matrix[ia][ib]

    @property
    def pairing_matrix(self):
        pm = getattr(self, "_pm", None)
        if pm is None:
            pm = [[self.pairing_basis(i, j) for j in range(self.dim)] for i in range(self.dim)]
            self._pm = pm
        return pm

    def pairing(self, u, v):
        P = self.pairing_matrix
        total = Fraction(0)
        for i, x in enumerate(u):
            if is_zero(x):
                continue
            for j, y in enumerate(v):
                if not is_zero(y) and not is_zero(P[i][j]):
                    total = total + x * y * P[i][j]
        return total

    def describe_vector(self, coords):
        parts = []
        for k, c in enumerate(coords):
            if not is_zero(c):
                parts.append(f"{scalar_str(c)}*{self.label(k)}")
        return " + ".join(parts) if parts else "0"


def build_bmodel(W, G, conventions=DEFAULT_CONVENTIONS) -> BModel:
    return BModel(W, G, conventions)


def element_degree(e: SectorElement, model: BModel) -> Fraction:
    return model.element_degree(e)


def star_product(a: SectorElement, b: SectorElement, model: BModel) -> ProductEvaluation:
    return model.evaluate_product(a, b)


def bmodel_pairing(a: SectorElement, b: SectorElement, model: BModel):
    return model.pairing_basis(model.index[a], model.index[b])


@dataclass
class BModelReport(AxiomReport):
    invertible: bool = True

    @property
    def severity(self):
        """"bug" for an invertible W (the axioms are a theorem there), else "finding"."""
        if self.ok:
            return "pass"
        return "bug" if self.invertible else "finding"


def verify_bmodel_axioms(model: BModel) -> BModelReport:
    """Exhaustive check of the Frobenius algebra axioms on the model basis."""
    rep = BModelReport(invertible=model.invertible)
    d = model.dim
    lab = model.label
    sparse = {}

    def sp(i, j):
        key = (i, j)
        if key not in sparse:
            sparse[key] = [(k, c) for k, c in enumerate(model.star_basis(i, j)) if not is_zero(c)]
        return sparse[key]

    # closure: products stay inside the invariant sectors
    for i in range(d):
        for j in range(d):
            ev = model.evaluate_product(model.basis[i], model.basis[j])
            if ev.leak:
                rep.record("closure", False, (lab(i), lab(j)))
    rep.record("closure", True)

    u = model.unit_index()
    if u is None:
        rep.record("identity", False, "no unit [1; 0] in the basis")
    else:
        for i in range(d):
            if model.star_basis(u, i) != model.basis_vector(i):
                rep.record("identity", False, (lab(i),))
        rep.record("identity", True)

    for i in range(d):
        for j in range(d):
            if model.star_basis(i, j) != model.star_basis(j, i):
                rep.record("commutativity", False, (lab(i), lab(j)))
            for k, _ in sp(i, j):
                if model.degrees[k] != model.degrees[i] + model.degrees[j]:
                    rep.record("degree-additivity", False, (lab(i), lab(j), lab(k)))
                    break
    rep.record("commutativity", True)
    rep.record("degree-additivity", True)

    for i in range(d):
        for j in range(d):
            for k in range(d):
                left = {}
                for m, c in sp(i, j):
                    for t, e in sp(m, k):
                        left[t] = left.get(t, 0) + c * e
                right = {}
                for m, c in sp(j, k):
                    for t, e in sp(i, m):
                        right[t] = right.get(t, 0) + c * e
                left = {t: v for t, v in left.items() if not is_zero(v)}
                right = {t: v for t, v in right.items() if not is_zero(v)}
                if left != right:
                    rep.record("associativity", False, (lab(i), lab(j), lab(k)))
    rep.record("associativity", True)

    P = model.pairing_matrix
    for i in range(d):
        for j in range(d):
            if P[i][j] != P[j][i]:
                rep.record("pairing-symmetry", False, (lab(i), lab(j)))
    rep.record("pairing-symmetry", True)
    det = mat_determinant(P) if d else Fraction(1)
    rep.record("nondegeneracy", not is_zero(det), "pairing determinant is 0")

    for i in range(d):
        for j in range(d):
            for k in range(d):
                left = sum((c * P[m][k] for m, c in sp(i, j)), Fraction(0))
                right = sum((c * P[i][m] for m, c in sp(j, k)), Fraction(0))
                if left != right:
                    rep.record("frobenius", False, (lab(i), lab(j), lab(k)))
    rep.record("frobenius", True)
    return rep
