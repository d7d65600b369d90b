"""Weights, admissibility, atomic classification and singularity equivalence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InputError,
    NonUniqueWeightsError,
    NotQuasihomogeneousError,
    SearchInconclusiveError,
    WeightError,
    WeightMismatchError,
)
from .groebner import buchberger, normal_form, standard_monomials
from .linalg import integer_rank, rank, solve
from .orders import LEX, MonomialOrder
from .polynomial import Polynomial, jacobian, mono_str
from .polynomial import determinant as poly_determinant
from .scalars import Scalar, field_of, pick_root, rebase, simplest_generator


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple
    variables: tuple

    @property
    def shape(self):
        return (len(self.rows), len(self.variables))

    def tolist(self):
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class WeightVector:
    q: tuple
    unique: bool = True

    @property
    def phases(self):
        """The exponent-of-J vector (q_1, ..., q_n) reduced mod Z."""
        return tuple(x % 1 for x in self.q)

    def degree(self, exp):
        return sum((Fraction(a) * w for a, w in zip(exp, self.q)), Fraction(0))

    def __iter__(self):
        return iter(self.q)

    def __len__(self):
        return len(self.q)


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class AtomicBlock:
    variables: tuple          # indices into the ambient variable list
    summand: Polynomial
    kind: str                 # fermat | loop | chain | noninvertible-block
    arrangement: tuple = ()   # variable indices in shape order (x_1, x_2, ...)
    exponents: tuple = ()     # a_1, ..., a_k matching ``arrangement``


@dataclass(frozen=True)
class AtomicDecomposition:
    blocks: tuple
    invertible: bool

    def kinds(self):
        return [b.kind for b in self.blocks]


def exponent_matrix(W):
    """Rows are monomial exponents in canonical (descending lex) term order."""
    if W.is_zero():
        raise InputError("exponent matrix of the zero polynomial")
    rows = tuple(exp for exp, _ in W.sorted_terms(LEX))
    return ExponentMatrix(rows, W.variables)


def compute_weights(W, require_unique=True):
    """Solve A q = (1, ..., 1) exactly."""
    n = W.nvars
    if n == 0:
        return WeightVector((), True)
    A = exponent_matrix(W).rows
    sol = solve([[Fraction(a) for a in row] for row in A], [Fraction(1)] * len(A))
    if sol is None:
        raise NotQuasihomogeneousError(f"{W} is not quasihomogeneous")
    unique = integer_rank(A) == n
    if not unique:
        if require_unique:
            raise NonUniqueWeightsError(f"weights of {W} are not unique (rank {integer_rank(A)} < {n})")
        return WeightVector(tuple(sol), False)
    if any(not 0 < q < 1 for q in sol):
        raise WeightError(f"weights {[str(q) for q in sol]} of {W} are not all in (0, 1)")
    return WeightVector(tuple(sol), True)


def jacobian_basis(W, order=None):
    """Standard monomials of the Jacobian quotient, or None if infinite."""
    if W.nvars == 0:
        return [()]
    order = order or MonomialOrder.grevlex(W.nvars)
    gens = jacobian(W)
    if not gens:
        return None
    return standard_monomials(buchberger(gens, order))


def is_nondegenerate(W):
    if W.nvars == 0:
        return True
    for exp in W.terms:
        if sum(exp) <= 1:
            raise InputError(f"{W} has a constant or linear part")
    return jacobian_basis(W) is not None


def is_admissible(W):
    if W.nvars == 0:
        return Admissibility(True)
    if W.is_zero():
        return Admissibility(False, "zero polynomial")
    for exp in W.terms:
        if sum(exp) == 2 and max(exp) == 1:
            return Admissibility(False, f"cross-term monomial {mono_str(exp, W.variables)}")
        if sum(exp) <= 1:
            return Admissibility(False, "constant or linear part")
    try:
        weights = compute_weights(W, require_unique=False)
    except NotQuasihomogeneousError:
        return Admissibility(False, "not quasihomogeneous")
    if not is_nondegenerate(W):
        return Admissibility(False, "degenerate: Jacobian quotient is infinite dimensional")
    if not weights.unique:
        return Admissibility(False, "weights not unique")
    if any(not 0 < q < 1 for q in weights.q):
        return Admissibility(False, "weights not in (0, 1)")
    return Admissibility(True)


def variable_components(W):
    """Connected components of the variable-sharing graph, as sorted index tuples."""
    n = W.nvars
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for exp in W.terms:
        support = [i for i, a in enumerate(exp) if a]
        for i in support[1:]:
            parent[find(i)] = find(support[0])
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(g) for g in groups.values())


def block_summand(W, block):
    block = set(block)
    return Polynomial(W.variables, {e: c for e, c in W.terms.items()
                                    if any(a for i, a in enumerate(e) if i in block)})


def _match_shape(block, monos):
    """Try fermat/chain/loop shapes over all orderings of ``block``."""
    k = len(block)
    mono_set = set(monos)
    if len(mono_set) != k:
        return None
    for perm in itertools.permutations(block):
        exps = []
        for kind in ("chain", "loop"):
            exps = []
            ok = True
            for pos, var in enumerate(perm):
                nxt = perm[pos + 1] if pos + 1 < k else (perm[0] if kind == "loop" else None)
                cand = [e for e in mono_set
                        if e[var] >= 2 and all(a == 0 for i, a in enumerate(e)
                                               if i not in (var, nxt))
                        and (nxt is None or e[nxt] == 1)]
                if nxt is None:
                    cand = [e for e in cand if sum(e) == e[var]]
                if len(cand) != 1:
                    ok = False
                    break
                exps.append(cand[0][var])
            if ok:
                return ("fermat" if k == 1 else kind), perm, tuple(exps)
    return None


def classify(W):
    comps = variable_components(W)
    invertible = len(W.terms) == W.nvars
    blocks = []
    for comp in comps:
        summand = block_summand(W, comp)
        if invertible:
            match = _match_shape(comp, list(summand.terms))
            if match is not None:
                kind, arrangement, exps = match
                blocks.append(AtomicBlock(comp, summand, kind, arrangement, exps))
                continue
        blocks.append(AtomicBlock(comp, summand, "noninvertible-block"))
    return AtomicDecomposition(tuple(blocks), invertible)


def check_same_weights(W1, W2):
    q1 = compute_weights(W1).q
    q2 = compute_weights(W2).q
    return sorted(q1) == sorted(q2)


@dataclass(frozen=True)
class WebbResult:
    applicable: bool
    witness: tuple = None     # exponent tuple of weighted degree 1

    def __bool__(self):
        return self.applicable


def webb_applicable(W):
    """False (with witness) when some standard monomial has weighted degree exactly 1."""
    weights = compute_weights(W)
    basis = jacobian_basis(W, MonomialOrder.weighted(weights.q) if W.nvars else None)
    if basis is None:
        raise InputError(f"{W} is degenerate")
    for exp in basis:
        if weights.degree(exp) == 1:
            return WebbResult(False, exp)
    return WebbResult(True)


# ---------------------------------------------------------------------------
# equivalence search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Substitution:
    """Images of the target polynomial's variables, in the source variables."""

    images: tuple
    target_variables: tuple

    @property
    def variables(self):
        return self.images[0].variables if self.images else ()

    def apply(self, W2):
        return W2.compose(list(self.images))

    def to_strs(self):
        return [f"{v} -> {img}" for v, img in zip(self.target_variables, self.images)]


@dataclass
class EquivalenceResult:
    witness: Substitution = None
    unit_certificate: bool = False
    equations: list = field(default_factory=list)
    unknowns: tuple = ()
    groebner_basis: object = None
    note: str = ""

    @property
    def found(self):
        return self.witness is not None


def _weighted_monomials(weights, target):
    """Exponent tuples with weighted degree exactly ``target``."""
    n = len(weights)
    out = []

    def rec(i, prefix, remaining):
        if i == n:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        a = 0
        while a * weights[i] <= remaining:
            rec(i + 1, prefix + [a], remaining - a * weights[i])
            a += 1

    rec(0, [], Fraction(target))
    return out


def equivalence_system(W1, W2):
    """Polynomial system in the coefficients of a weighted substitution h with W1 = W2 o h.

    Returns (equations, unknown names, image templates) where the templates list,
    for each variable of W2, the pairs (unknown index, exponent in W1's variables).
    """
    q1 = compute_weights(W1).q
    q2 = compute_weights(W2).q
    n = W1.nvars
    templates = []
    unknowns = []
    for qi in q2:
        slots = []
        for exp in sorted(_weighted_monomials(q1, qi), reverse=True):
            slots.append((len(unknowns), exp))
            unknowns.append(f"u{len(unknowns)}")
        templates.append(slots)
    names = tuple(unknowns) + ("e",)
    allvars = W1.variables + names
    m = len(names)

    def lift(exp, k=None):
        tail = [0] * m
        if k is not None:
            tail[k] = 1
        return tuple(exp) + tuple(tail)

    images = [Polynomial(allvars, {lift(exp, k): 1 for k, exp in slots}) for slots in templates]
    composed = W2.embed(W2.variables).compose(images) if W2.nvars else Polynomial(allvars)
    W1_lift = Polynomial(allvars, {lift(e): c for e, c in W1.terms.items()})
    diff = composed - W1_lift
    grouped = {}
    for exp, c in diff.terms.items():
        xs, us = exp[:n], exp[n:]
        grouped.setdefault(xs, {})[us] = c
    equations = [Polynomial(names, terms) for _, terms in sorted(grouped.items(), reverse=True)]

    # linear part within weight-equal groups; saturation e * det - 1
    lin_poly = [[Polynomial(names) for _ in range(n)] for _ in range(n)]
    for i, slots in enumerate(templates):
        for k, exp in slots:
            if sum(exp) == 1:
                j = exp.index(1)
                lin_poly[i][j] = Polynomial.variable(names, names[k])
    det = poly_determinant(lin_poly, names)
    sat = det * Polynomial.variable(names, "e") - 1
    equations.append(sat)
    return equations, names, templates


def _quotient_coords(p, gb, basis_index):
    nf = normal_form(p, gb)
    vec = [Fraction(0)] * len(basis_index)
    for exp, c in nf.terms.items():
        vec[basis_index[exp]] = c
    return vec


def _univariate_representation(gb, names, weights):
    """Express every unknown as a polynomial in a separating linear form s.

    Works in the finite-dimensional quotient by the (grevlex) basis: the
    minimal polynomial of s comes from the first linear dependency among
    the normal forms of its powers.  Returns (minpoly, [coeffs of v_i in s])
    or None when s does not generate the quotient.
    """
    basis = standard_monomials(gb)
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)
    s = Polynomial(names)
    for k, v in enumerate(names):
        s = s + Polynomial.variable(names, v) * weights[k]
    powers = [Polynomial.constant(names, 1)]
    vecs = [_quotient_coords(powers[0], gb, index)]
    for _ in range(dim):
        powers.append(normal_form(powers[-1] * s, gb))
        vecs.append(_quotient_coords(powers[-1], gb, index))
    # columns = powers of s; the first dim of them must be independent
    cols = [list(r) for r in zip(*vecs[:dim])]
    if rank(cols) < dim:
        return None
    rel = solve(cols, vecs[dim])
    minpoly = [-c for c in rel] + [Fraction(1)]
    reps = []
    for k, v in enumerate(names):
        target = _quotient_coords(Polynomial.variable(names, v), gb, index)
        reps.append(solve(cols, target))
    return minpoly, reps


def _reduce_to_zero_dim(equations, names, order):
    """Pin free unknowns until the quotient is finite dimensional."""
    eqs = list(equations)
    gb = buchberger(eqs, order)
    for _ in range(len(names)):
        if gb.is_unit() or standard_monomials(gb) is not None:
            return eqs, gb
        bounds = [None] * len(names)
        for lm in gb.leading_monomials:
            sup = [i for i, a in enumerate(lm) if a]
            if len(sup) == 1:
                bounds[sup[0]] = lm[sup[0]]
        free = next(i for i, b in enumerate(bounds) if b is None)
        for value in (1, 0, -1, 2):
            trial = eqs + [Polynomial.variable(names, names[free]) - value]
            tgb = buchberger(trial, order)
            if not tgb.is_unit():
                eqs, gb = trial, tgb
                break
        else:
            return eqs, gb
    return eqs, gb


def _extract_by_univariate_representation(gb, names):
    for shift in range(4):
        weights = [k + 1 + shift * (k + 2) for k in range(len(names))]
        rep = _univariate_representation(gb, names, weights)
        if rep is None:
            continue
        minpoly, reps = rep
        root = pick_root(minpoly, symbol="c")
        values = {}
        for k, coeffs in enumerate(reps):
            val = Fraction(0)
            for j, c in enumerate(coeffs):
                if c:
                    val = val + c * root ** j
            if isinstance(val, Scalar) and val.is_rational():
                val = val.to_fraction()
            values[k] = val
        if isinstance(root, Scalar):
            keys = sorted(values)
            gen = simplest_generator([values[k] for k in keys])
            if gen is not None and gen != gen.field.generator:
                values = dict(zip(keys, rebase([values[k] for k in keys], gen)))
            fld = field_of(values.values())
            values = {k: (v if isinstance(v, Scalar) else fld.embed(v)) for k, v in values.items()}
        return values
    return None


def search_linear_equivalence(W1, W2):
    """Look for a weighted substitution h with W1 = W2 o h.

    ``witness`` is None when the coefficient system (with invertibility
    saturation) generates the unit ideal; ``unit_certificate`` is then True.
    """
    for W in (W1, W2):
        adm = is_admissible(W)
        if not adm:
            raise InputError(f"{W} is not admissible: {adm.reason}")
    if W1.nvars != W2.nvars or not check_same_weights(W1, W2):
        raise WeightMismatchError(f"{W1} and {W2} do not share the same unordered weights")
    if W1.variables == W2.variables and W1 == W2:
        ident = tuple(Polynomial.variable(W1.variables, v) for v in W1.variables)
        return EquivalenceResult(Substitution(ident, W2.variables), note="identical polynomials")

    equations, names, templates = equivalence_system(W1, W2)
    order = MonomialOrder.grevlex(len(names))
    gb = buchberger(equations, order)
    if gb.is_unit():
        return EquivalenceResult(None, True, equations, names, gb,
                                 note="coefficient system generates the unit ideal")
    pinned, zgb = _reduce_to_zero_dim(equations, names, order)
    values = None
    if not zgb.is_unit() and standard_monomials(zgb) is not None:
        values = _extract_by_univariate_representation(zgb, names)
    if values is None:
        raise SearchInconclusiveError(
            "coefficient system is solvable but no witness with a single extension was extracted",
            equations=[str(e) for e in equations])
    fld = field_of(values.values())
    images = []
    for slots in templates:
        img = Polynomial(W1.variables)
        for k, exp in slots:
            v = values[k]
            if v:
                img = img + Polynomial.monomial(W1.variables, exp, v)
        images.append(img)
    sub = Substitution(tuple(images), W2.variables)
    W1_check = W1.map_coefficients(fld.embed) if fld is not None else W1
    if sub.apply(W2) != W1_check:
        raise SearchInconclusiveError("extracted substitution failed exact re-verification")
    return EquivalenceResult(sub, False, equations, names, gb, note="witness re-verified exactly")
