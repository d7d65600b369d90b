"""Frobenius algebra maps: verification, scaling solutions, extension and tensor products.

A map is stored by the target coordinates of the images of the source basis.
Sources and targets are Milnor rings or B-models; both are viewed through a
small adapter exposing basis, grading, product and pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BasisMismatchError,
    InputError,
    NotWellBehavedError,
    PreconditionError,
    SectorImageMismatchError,
    UnsolvableSystemError,
)
from .linalg import rank, row_echelon, solve
from .milnor import MilnorRing
from .orbifold import DEFAULT_CONVENTIONS, BModel, SectorElement
from .polynomial import Polynomial, mono_str
from .scalars import Scalar, field_of, is_zero, pick_root, rational_nth_root, scalar_str
from .symmetry import GroupElement, SymmetryGroup, act_on_monomial, is_well_behaved, subgroup_generated


# ---------------------------------------------------------------------------
# algebra adapter
# ---------------------------------------------------------------------------


class _Algebra:
    def __init__(self, obj):
        self.obj = obj
        if isinstance(obj, MilnorRing):
            self.kind = "milnor"
            self.dim = obj.mu
            self.degrees = obj.degrees
            self.labels = tuple(obj.monomial_str(i) for i in range(obj.mu))
            self.monomials = obj.basis
            self.sectors = tuple(GroupElement.zero(obj.W.nvars) for _ in obj.basis)
            self.product = obj.product
            self.pairing = obj.pairing
            self.unit = obj.unit().coords
            self.variables = obj.variables
        elif isinstance(obj, BModel):
            self.kind = "bmodel"
            self.dim = obj.dim
            self.degrees = obj.degrees
            self.labels = tuple(obj.label(i) for i in range(obj.dim))
            self.monomials = tuple(b.monomial for b in obj.basis)
            self.sectors = tuple(b.g for b in obj.basis)
            self.product = obj.star
            self.pairing = obj.pairing
            u = obj.unit_index()
            self.unit = obj.basis_vector(u) if u is not None else None
            self.variables = obj.variables
        else:
            raise InputError(f"cannot build a map on {type(obj).__name__}")

    def basis_vector(self, i):
        return tuple(Fraction(int(i == j)) for j in range(self.dim))

    def hessian_coords(self):
        """Coordinates of the Hessian line (untwisted sector for B-models), or None."""
        obj = self.obj
        if self.kind == "milnor":
            v = [Fraction(0)] * obj.mu
            v[obj.hessian_index] = obj.hessian_coefficient
            return tuple(v)
        ring = obj.sectors[GroupElement.zero(obj.n)].ring
        hp = Polynomial.monomial(obj.variables, ring.hessian_monomial, ring.hessian_coefficient)
        try:
            return obj.element(hp, GroupElement.zero(obj.n))
        except InputError:
            return None


# ---------------------------------------------------------------------------
# maps and certificates
# ---------------------------------------------------------------------------


class FrobeniusMap:
    """Linear map given on the source basis; ``images[i]`` are target coordinates."""

    def __init__(self, source, target, images, name="phi"):
        self.source = source
        self.target = target
        self._src = _Algebra(source)
        self._tgt = _Algebra(target)
        images = [tuple(v) for v in images]
        if len(images) != self._src.dim:
            raise InputError(f"need {self._src.dim} images, got {len(images)}")
        for v in images:
            if len(v) != self._tgt.dim:
                raise InputError(f"image has {len(v)} coordinates, target has dimension {self._tgt.dim}")
        self.images = tuple(images)
        self.name = name

    @property
    def kind(self):
        return self._src.kind

    @property
    def field(self):
        return field_of(c for v in self.images for c in v)

    def apply(self, coords):
        out = [Fraction(0)] * self._tgt.dim
        for i, x in enumerate(coords):
            if is_zero(x):
                continue
            for k, y in enumerate(self.images[i]):
                if not is_zero(y):
                    out[k] = out[k] + x * y
        return tuple(out)

    def diagonal_pattern(self):
        """[(target index, constant)] when each image is a nonzero multiple of a distinct basis element."""
        pattern = []
        for v in self.images:
            nz = [(k, c) for k, c in enumerate(v) if not is_zero(c)]
            if len(nz) != 1:
                return None
            pattern.append(nz[0])
        if len({k for k, _ in pattern}) != len(pattern):
            return None
        return pattern

    @property
    def is_diagonal(self):
        return self.diagonal_pattern() is not None

    def image_str(self, i):
        parts = [f"{scalar_str(c)}*{self._tgt.labels[k]}" for k, c in enumerate(self.images[i]) if not is_zero(c)]
        return " + ".join(parts) if parts else "0"

    def to_lines(self):
        return [f"{self._src.labels[i]} -> {self.image_str(i)}" for i in range(self._src.dim)]

    def __repr__(self):
        return f"FrobeniusMap({self.name}: dim {self._src.dim} -> {self._tgt.dim})"


@dataclass
class IsoCertificate:
    checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def record(self, name, ok, witness=None):
        prev = self.checks.get(name, True)
        self.checks[name] = prev and ok
        if not ok and name not in self.witnesses:
            self.witnesses[name] = witness

    @property
    def ok(self):
        return all(v for v in self.checks.values() if v is not None)

    def __bool__(self):
        return self.ok

    def failures(self):
        return [k for k, v in self.checks.items() if v is False]


def verify_frobenius_iso(f: FrobeniusMap, group: SymmetryGroup | None = None) -> IsoCertificate:
    """Exhaustively check that ``f`` is an isomorphism of graded Frobenius algebras."""
    cert = IsoCertificate()
    S, T = f._src, f._tgt
    if S.dim != T.dim:
        cert.record("dimension", False, (S.dim, T.dim))
        return cert
    cert.record("dimension", True)
    d = S.dim
    cols = [list(f.images[i]) for i in range(d)]
    r = rank(cols) if d else 0
    cert.record("bijective", r == d, None if r == d else f"rank {r} < {d}")

    if S.unit is None or T.unit is None:
        cert.record("unit", False, "missing unit")
    else:
        fu = f.apply(S.unit)
        cert.record("unit", fu == T.unit, None if fu == T.unit else "f(1) != 1")

    for i in range(d):
        for k, c in enumerate(f.images[i]):
            if not is_zero(c) and T.degrees[k] != S.degrees[i]:
                cert.record("graded", False, (S.labels[i], T.labels[k]))
    cert.record("graded", True)

    images = f.images
    for i in range(d):
        for j in range(i, d):
            left = f.apply(S.product(S.basis_vector(i), S.basis_vector(j)))
            right = T.product(images[i], images[j])
            if left != right:
                cert.record("products", False, (S.labels[i], S.labels[j]))
            a = S.pairing(S.basis_vector(i), S.basis_vector(j))
            b = T.pairing(images[i], images[j])
            if a != b:
                cert.record("pairings", False, (S.labels[i], S.labels[j], scalar_str(a), scalar_str(b)))
    cert.record("products", True)
    cert.record("pairings", True)

    hs, ht = S.hessian_coords(), T.hessian_coords()
    if hs is None or ht is None:
        cert.checks["hessian_transport"] = None
    else:
        fh = f.apply(hs)
        cert.record("hessian_transport", fh == ht, None if fh == ht else "f(Hess) != Hess")

    if group is not None:
        eq = is_equivariant(f, group)
        cert.record("equivariant", eq.ok, eq.witness)
    return cert


@dataclass(frozen=True)
class EquivarianceResult:
    ok: bool
    witness: tuple = None

    def __bool__(self):
        return self.ok


def is_equivariant(f: FrobeniusMap, G: SymmetryGroup, convention="full") -> EquivarianceResult:
    """Phase comparison: each image monomial must carry the phase of its source monomial."""
    S, T = f._src, f._tgt
    if G.nvars != len(S.variables) or G.nvars != len(T.variables):
        raise InputError("group, source and target must have the same number of variables")
    for i in range(S.dim):
        for g in G.generators:
            theta = act_on_monomial(g, S.monomials[i], convention)
            for k, c in enumerate(f.images[i]):
                if is_zero(c):
                    continue
                phi = act_on_monomial(g, T.monomials[k], convention)
                if phi != theta:
                    return EquivarianceResult(False, (S.labels[i], T.labels[k], str(g), str(theta), str(phi)))
    return EquivarianceResult(True)


def identity_map(A) -> FrobeniusMap:
    alg = _Algebra(A)
    return FrobeniusMap(A, A, [alg.basis_vector(i) for i in range(alg.dim)], "id")


def compose(f: FrobeniusMap, g: FrobeniusMap) -> FrobeniusMap:
    """g after f."""
    if f.target is not g.source:
        raise InputError("maps are not composable")
    fl = [x for x in (f.field, g.field) if x is not None]
    if len(fl) == 2 and fl[0] != fl[1]:
        raise InputError("maps are defined over different extension fields")
    return FrobeniusMap(f.source, g.target, [g.apply(v) for v in f.images], f"{g.name}.{f.name}")


def inverse(f: FrobeniusMap) -> FrobeniusMap:
    S, T = f._src, f._tgt
    d = S.dim
    if T.dim != d:
        raise InputError("map between spaces of different dimension has no inverse")
    # columns of M are the images; solve M x = e_k for each target basis vector
    M = [[f.images[i][k] for i in range(d)] for k in range(d)]
    out = []
    for k in range(d):
        x = solve(M, list(T.basis_vector(k)))
        if x is None:
            raise InputError("map is not invertible")
        out.append(tuple(x))
    return FrobeniusMap(f.target, f.source, out, f"{f.name}^-1")


def diagonal_map(source, target, constants, name="phi") -> FrobeniusMap:
    """φ(b_i) = constants[i] * b'_i with b'_i the target basis element of the same label."""
    S, T = _Algebra(source), _Algebra(target)
    index = {lab: k for k, lab in enumerate(T.labels)}
    images = []
    for i, lab in enumerate(S.labels):
        if lab not in index:
            raise BasisMismatchError(f"target has no basis element {lab}")
        v = [Fraction(0)] * T.dim
        v[index[lab]] = constants[i]
        images.append(tuple(v))
    return FrobeniusMap(source, target, images, name)


# ---------------------------------------------------------------------------
# binomial systems  prod_i c_i^{e_i} = r
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    exponents: tuple
    value: Fraction
    origin: str = ""

    def describe(self, names):
        lhs = mono_str(tuple(max(e, 0) for e in self.exponents), names)
        neg = tuple(max(-e, 0) for e in self.exponents)
        if any(neg):
            lhs = f"{lhs}/({mono_str(neg, names)})"
        return f"{lhs} = {self.value}"


def _hermite(constraints, n):
    """Integer row echelon form of the exponent rows with multiplicatively tracked values.

    Returns (rows, inconsistency) where rows are (exponents, value) with
    positive pivots, or inconsistency = a derived (0 = value != 1) row.
    """
    rows = [[list(c.exponents), Fraction(c.value)] for c in constraints]
    r = 0
    for col in range(n):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][0][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][0][col]))
            rows[r], rows[piv] = rows[piv], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                a = rows[i][0][col]
                if not a:
                    continue
                q = a // rows[r][0][col]
                rows[i][0] = [x - q * y for x, y in zip(rows[i][0], rows[r][0])]
                rows[i][1] = rows[i][1] / rows[r][1] ** q
                if rows[i][0][col]:
                    done = False
            if done:
                break
        if r < len(rows) and rows[r][0][col]:
            if rows[r][0][col] < 0:
                rows[r][0] = [-x for x in rows[r][0]]
                rows[r][1] = 1 / rows[r][1]
            r += 1
    for e, v in rows[r:]:
        if v != 1:
            return rows[:r], (tuple(e), v)
    return [(tuple(e), v) for e, v in rows[:r]], None


def _implied(rows, constraint, n):
    """Whether ``constraint`` follows from the echelon rows (lattice membership + value)."""
    e = list(constraint.exponents)
    val = Fraction(constraint.value)
    for exps, v in rows:
        col = next(i for i, x in enumerate(exps) if x)
        if e[col] % exps[col]:
            return False
        q = e[col] // exps[col]
        e = [a - q * b for a, b in zip(e, exps)]
        val = val / v ** q
    return not any(e) and val == 1


def solve_binomial_system(constraints, n, symbol="c"):
    """Solve prod c_i^{e_i} = r over Q or one simple extension.

    Returns a list of n values, or None (with the contradiction) when the
    system is inconsistent.  Free unknowns are set to 1.
    """
    rows, bad = _hermite(constraints, n)
    if bad is not None:
        return None, bad
    values = [None] * n
    pivots = {next(i for i, x in enumerate(e) if x): (e, v) for e, v in rows}
    for i in range(n):
        if i not in pivots:
            values[i] = Fraction(1)
    for col in sorted(pivots, reverse=True):
        exps, v = pivots[col]
        rhs = v
        for j in range(col + 1, n):
            if exps[j]:
                rhs = rhs / values[j] ** exps[j]
        d = exps[col]
        if d == 1:
            values[col] = rhs
            continue
        if isinstance(rhs, Scalar) and rhs.is_rational():
            rhs = rhs.to_fraction()
        if isinstance(rhs, Scalar):
            raise UnsolvableSystemError(
                f"need a {d}-th root of {rhs} inside an extension; a second extension is not supported")
        root = rational_nth_root(rhs, d)
        if root is not None:
            values[col] = root
            continue
        if field_of(x for x in values if x is not None) is not None:
            raise UnsolvableSystemError(f"need a second extension for {symbol}^{d} = {rhs}")
        poly = [-rhs] + [Fraction(0)] * (d - 1) + [Fraction(1)]
        values[col] = pick_root(poly, symbol)
    fld = field_of(values)
    if fld is not None:
        values = [fld.embed(x) if not isinstance(x, Scalar) else x for x in values]
    return values, None


# ---------------------------------------------------------------------------
# scaling isomorphisms between Milnor rings
# ---------------------------------------------------------------------------


@dataclass
class ScalingSolution:
    source: MilnorRing
    target: MilnorRing
    map: FrobeniusMap = None
    certificate: IsoCertificate = None
    pairing_constraints: list = field(default_factory=list)
    product_constraints: list = field(default_factory=list)
    oracles_agree: bool = None
    values: list = None
    infeasible: list = field(default_factory=list)

    @property
    def found(self):
        return self.map is not None

    def power(self, exps):
        """The constant prod c_i^{a_i} of the solved map."""
        out = Fraction(1)
        for v, a in zip(self.values, exps):
            out = out * v ** a
        return out


def _target_change_of_basis(source, target):
    """Target coordinates of the source basis monomials, and the inverse change of basis."""
    cols = [target.coords_of(Polynomial.monomial(target.variables, e)) for e in source.basis]
    if rank([list(c) for c in cols]) != target.mu:
        raise BasisMismatchError("source basis monomials are not a basis of the target ring")
    M = [[cols[i][k] for i in range(len(cols))] for k in range(target.mu)]

    def to_source_coords(v):
        return solve(M, list(v))

    return cols, to_source_coords


def solve_scaling_iso(source: MilnorRing, target: MilnorRing, symbol="c") -> ScalingSolution:
    """Find φ(x^a) = (prod c_i^{a_i}) x^a preserving products and pairings.

    Two independent constraint sets are derived: pairing preservation, and
    product preservation together with Hessian transport.  They must agree.
    """
    if source.variables != target.variables:
        raise BasisMismatchError("source and target use different variables")
    if sorted(source.weights.q) != sorted(target.weights.q) or source.weights.q != target.weights.q:
        raise BasisMismatchError("source and target have different weights")
    if source.mu != target.mu:
        raise BasisMismatchError(f"dimensions differ: {source.mu} vs {target.mu}")
    n = source.W.nvars
    basis = source.basis
    mu = source.mu
    cols, to_src = _target_change_of_basis(source, target)
    sol = ScalingSolution(source, target)
    names = source.variables

    def add(collection, exps, s_val, t_val, origin):
        if is_zero(s_val) and is_zero(t_val):
            return
        if is_zero(s_val) or is_zero(t_val):
            sol.infeasible.append(f"{origin}: source {scalar_str(s_val)} vs target {scalar_str(t_val)}")
            return
        collection.append(Constraint(tuple(exps), Fraction(s_val) / Fraction(t_val), origin))

    unit = [[Fraction(int(i == j)) for j in range(mu)] for i in range(mu)]
    lab = [mono_str(e, names) for e in basis]
    # oracle A: pairings  c^{a_i + a_j} <t_i, t_j>_T = <e_i, e_j>_S
    for i in range(mu):
        for j in range(i, mu):
            s = source.pairing(unit[i], unit[j])
            t = target.pairing(cols[i], cols[j])
            add(sol.pairing_constraints, [a + b for a, b in zip(basis[i], basis[j])], s, t,
                f"pairing <{lab[i]}, {lab[j]}>")
    # oracle B: products  S_ijk c^{a_k} = c^{a_i + a_j} T'_ijk, and Hessian transport
    for i in range(mu):
        for j in range(i, mu):
            s_prod = source.basis_product(i, j)
            t_prod = to_src(target.product(cols[i], cols[j]))
            for k in range(mu):
                exps = [a + b - c for a, b, c in zip(basis[i], basis[j], basis[k])]
                add(sol.product_constraints, exps, t_prod[k], s_prod[k],
                    f"product {lab[i]}*{lab[j]} along {lab[k]}")
    h_t = [Fraction(0)] * mu
    h_t[target.hessian_index] = target.hessian_coefficient
    h_t = to_src(h_t)
    hs_idx = source.hessian_index
    for k in range(mu):
        s_val = source.hessian_coefficient if k == hs_idx else Fraction(0)
        add(sol.product_constraints, basis[k], h_t[k], s_val, f"hessian transport along {lab[k]}")
    if sol.infeasible:
        return sol

    rows_a, bad_a = _hermite(sol.pairing_constraints, n)
    rows_b, bad_b = _hermite(sol.product_constraints, n)
    if bad_a is not None or bad_b is not None:
        sol.infeasible.append("inconsistent constraint system")
        return sol
    sol.oracles_agree = (all(_implied(rows_a, c, n) for c in sol.product_constraints)
                         and all(_implied(rows_b, c, n) for c in sol.pairing_constraints))
    if not sol.oracles_agree:
        return sol
    values, bad = solve_binomial_system(sol.pairing_constraints, n, symbol)
    if values is None:
        sol.infeasible.append(f"contradiction {bad}")
        return sol
    sol.values = values
    for c in sol.pairing_constraints + sol.product_constraints:
        if sol.power(c.exponents) != c.value:
            raise ArithmeticError(f"solution violates {c.describe(names)}")
    images = []
    for i in range(mu):
        coef = sol.power(basis[i])
        images.append(tuple(coef * x for x in cols[i]))
    sol.map = FrobeniusMap(source, target, images, "phi")
    sol.certificate = verify_frobenius_iso(sol.map)
    return sol


def compare_constant(solution: ScalingSolution, exps, recorded):
    """Side-by-side report of a solved constant prod c^a and an externally recorded value."""
    computed = solution.power(exps) if solution.values is not None else None
    names = solution.source.variables
    return {
        "monomial": mono_str(exps, names),
        "computed": scalar_str(computed) if computed is not None else None,
        "recorded": scalar_str(recorded),
        "agree": computed is not None and computed == recorded,
    }


# ---------------------------------------------------------------------------
# extension to B-models
# ---------------------------------------------------------------------------


@dataclass
class ExtensionResult:
    psi: FrobeniusMap
    certificate: IsoCertificate
    source_model: BModel
    target_model: BModel


def _group_on(V, G):
    if G.W is V:
        return G
    return subgroup_generated(V, list(G.generators))


def extend_isomorphism(f: FrobeniusMap, G: SymmetryGroup, conventions=DEFAULT_CONVENTIONS,
                       check_preconditions=True) -> ExtensionResult:
    """ψ(⌊p; h⌉) = ⌊φ(p); h⌉, rebuilt on the orbifolded models and re-verified."""
    if f.kind != "milnor":
        raise InputError("extend_isomorphism needs a map between Milnor rings")
    S, T = f.source, f.target
    W, V = S.W, T.W
    if W.nvars != V.nvars:
        raise InputError("source and target must have the same number of variables")
    GW = _group_on(W, G)
    GV = _group_on(V, G)
    for P, H in ((W, GW), (V, GV)):
        wb = is_well_behaved(P, H)
        if not wb:
            g, block = wb.witness
            raise NotWellBehavedError(f"({P}, G) is not well behaved: {wb.reason}",
                                      element=str(g) if g is not None else None,
                                      block=[P.variables[i] for i in block] if block else None)
    if check_preconditions:
        cert = verify_frobenius_iso(f)
        if not cert:
            raise PreconditionError(f"phi is not an isomorphism: {cert.failures()}")
        eq = is_equivariant(f, GW)
        if not eq:
            raise PreconditionError(f"phi is not equivariant: {eq.witness}")
    BS = BModel(W, GW, conventions)
    BT = BModel(V, GV, conventions)
    images = []
    for b in BS.basis:
        src = S.coords_of(Polynomial.monomial(S.variables, b.monomial))
        img = f.apply(src)
        poly = T.to_polynomial(img)
        sec = BT.sectors[b.g]
        kept = poly.restrict(sec.locus).embed(T.variables) if sec.locus else \
            Polynomial.constant(T.variables, poly.coefficient((0,) * T.W.nvars))
        if kept != poly:
            raise SectorImageMismatchError(
                f"phi({mono_str(b.monomial, S.variables)}) = {poly} is not supported on fix({b.g})",
                element=str(b.g))
        try:
            images.append(BT.element(poly, b.g))
        except InputError as exc:
            raise SectorImageMismatchError(str(exc), element=str(b.g)) from None
    psi = FrobeniusMap(BS, BT, images, "psi")
    cert = verify_frobenius_iso(psi, GW)
    return ExtensionResult(psi, cert, BS, BT)


# ---------------------------------------------------------------------------
# tensor combination
# ---------------------------------------------------------------------------


def _sum_polynomial(P1, P2):
    if set(P1.variables) & set(P2.variables):
        raise InputError(f"summands share variables: {set(P1.variables) & set(P2.variables)}")
    variables = P1.variables + P2.variables
    return P1.embed(variables) + P2.embed(variables)


def product_group(G1: SymmetryGroup, G2: SymmetryGroup, W) -> SymmetryGroup:
    n1 = G1.nvars
    gens = [GroupElement(tuple(g.phases) + (0,) * G2.nvars) for g in G1.generators]
    gens += [GroupElement((0,) * n1 + tuple(g.phases)) for g in G2.generators]
    return subgroup_generated(W, gens)


def combine_isomorphisms(f1: FrobeniusMap, f2: FrobeniusMap, conventions=DEFAULT_CONVENTIONS) -> FrobeniusMap:
    """The map m = α·β ↦ f1(α)·f2(β) on the sum of two decoupled polynomials.

    Works for Milnor ring maps and for B-model maps (with the product group).
    """
    if f1.kind != f2.kind:
        raise InputError("cannot combine a Milnor map with a B-model map")
    fl = [x for x in (f1.field, f2.field) if x is not None]
    if len(fl) == 2 and fl[0] != fl[1]:
        raise InputError("maps are defined over different extension fields")
    if f1.kind == "milnor":
        return _combine_milnor(f1, f2)
    return _combine_bmodel(f1, f2, conventions)


def _combine_milnor(f1, f2):
    S1, S2, T1, T2 = f1.source, f2.source, f1.target, f2.target
    S = MilnorRing(_sum_polynomial(S1.W, S2.W))
    T = MilnorRing(_sum_polynomial(T1.W, T2.W))
    n1 = S1.W.nvars
    images = []
    for e in S.basis:
        a, b = e[:n1], e[n1:]
        p1 = T1.to_polynomial(f1.apply(S1.coords_of(Polynomial.monomial(S1.variables, a))))
        p2 = T2.to_polynomial(f2.apply(S2.coords_of(Polynomial.monomial(S2.variables, b))))
        images.append(T.coords_of(p1.embed(T.variables) * p2.embed(T.variables)))
    return FrobeniusMap(S, T, images, f"{f1.name}x{f2.name}")


def _combine_bmodel(f1, f2, conventions):
    B1, B2, C1, C2 = f1.source, f2.source, f1.target, f2.target
    WS = _sum_polynomial(B1.W, B2.W)
    WT = _sum_polynomial(C1.W, C2.W)
    S = BModel(WS, product_group(B1.G, B2.G, WS), conventions)
    T = BModel(WT, product_group(C1.G, C2.G, WT), conventions)
    n1 = B1.n
    t_index = {}
    for k, b in enumerate(T.basis):
        t_index[b] = k
    images = []
    for b in S.basis:
        g1 = GroupElement(b.g.phases[:n1])
        g2 = GroupElement(b.g.phases[n1:])
        i1 = B1.index[SectorElement(b.monomial[:n1], g1)]
        i2 = B2.index[SectorElement(b.monomial[n1:], g2)]
        v = [Fraction(0)] * T.dim
        for k1, c1 in enumerate(f1.images[i1]):
            if is_zero(c1):
                continue
            e1 = C1.basis[k1]
            for k2, c2 in enumerate(f2.images[i2]):
                if is_zero(c2):
                    continue
                e2 = C2.basis[k2]
                key = SectorElement(e1.monomial + e2.monomial, GroupElement(e1.g.phases + e2.g.phases))
                v[t_index[key]] = v[t_index[key]] + c1 * c2
        images.append(tuple(v))
    return FrobeniusMap(S, T, images, f"{f1.name}x{f2.name}")


def same_map(f: FrobeniusMap, g: FrobeniusMap) -> bool:
    """Exact equality of two maps on basis elements matched by label."""
    fs, ft, gs, gt = f._src, f._tgt, g._src, g._tgt
    if fs.labels != gs.labels or ft.labels != gt.labels:
        return sorted(fs.labels) == sorted(gs.labels) and _same_by_label(f, g)
    return f.images == g.images


def _same_by_label(f, g):
    gi = {lab: i for i, lab in enumerate(g._src.labels)}
    gt = {lab: k for k, lab in enumerate(g._tgt.labels)}
    for i, lab in enumerate(f._src.labels):
        v = f.images[i]
        w = g.images[gi[lab]]
        for k, c in enumerate(v):
            if c != w[gt[f._tgt.labels[k]]]:
                return False
    return True
