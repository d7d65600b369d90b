"""Diagonal symmetry groups, fixed loci and the action on monomials.

Group elements are stored additively: a phase vector g in (Q/Z)^n acts on
x_i by exp(2 pi i g_i).  Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import GroupError, InfiniteGroupError, InputError, NotASymmetryError
from .polynomial import mono_str
from .structure import block_summand, exponent_matrix, is_admissible, variable_components


@dataclass(frozen=True)
class GroupElement:
    phases: tuple

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(Fraction(x) % 1 for x in self.phases))

    @classmethod
    def zero(cls, n):
        return cls((0,) * n)

    def __add__(self, other):
        return GroupElement(tuple(a + b for a, b in zip(self.phases, other.phases)))

    def __neg__(self):
        return GroupElement(tuple(-a for a in self.phases))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return GroupElement(tuple(k * a for a in self.phases))

    __rmul__ = __mul__

    def __len__(self):
        return len(self.phases)

    def __iter__(self):
        return iter(self.phases)

    @property
    def det_phase(self):
        return sum(self.phases, Fraction(0)) % 1

    def is_zero(self):
        return not any(self.phases)

    def in_sl(self):
        return self.det_phase == 0

    def order(self):
        k = 1
        for p in self.phases:
            k = k * p.denominator // _gcd(k, p.denominator)
        return k

    def restrict(self, indices):
        return GroupElement(tuple(self.phases[i] for i in indices))

    def project(self, indices):
        """Keep the phases on ``indices`` and zero the rest."""
        keep = set(indices)
        return GroupElement(tuple(p if i in keep else 0 for i, p in enumerate(self.phases)))

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.phases) + ")"

    def to_str(self):
        return ",".join(str(p) for p in self.phases)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _sort_key(g):
    return (g.order(), g.phases)


@dataclass(frozen=True)
class SymmetryGroup:
    W: object
    generators: tuple
    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    @property
    def nvars(self):
        return self.W.nvars

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        if not isinstance(g, GroupElement):
            g = GroupElement(g)
        return g in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_cache_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_cache_set", s)
        return s

    def is_subgroup_of(self, other):
        return all(g in other for g in self.elements)

    def in_sl(self):
        return all(g.in_sl() for g in self.generators)


def _closure(gens, n):
    zero = GroupElement.zero(n)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g + s
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return tuple(sorted(seen, key=_sort_key))


def _minimal_generators(elements, n):
    """A small generating set chosen greedily from the elements by order."""
    gens = []
    span = {GroupElement.zero(n)}
    for g in sorted(elements, key=lambda e: (-e.order(), e.phases)):
        if g in span:
            continue
        gens.append(g)
        span = set(_closure(gens, n))
        if len(span) == len(elements):
            break
    return tuple(gens)


def smith_normal_form(A):
    """Return (U, D, V) with U A V = D diagonal, U and V unimodular (integer lists)."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, k):      # row dst += k * row src
        M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(M, src, dst, k):
        for row in M:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        # pivot: smallest nonzero absolute value in the remaining block
        while True:
            cands = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not cands:
                return U, D, V
            _, pi, pj = min(cands)
            swap_rows(D, t, pi)
            swap_rows(U, t, pi)
            swap_cols(D, t, pj)
            swap_cols(V, t, pj)
            done = True
            for i in range(t + 1, m):
                k = D[i][t] // D[t][t]
                if k:
                    add_row(D, t, i, -k)
                    add_row(U, t, i, -k)
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                k = D[t][j] // D[t][t]
                if k:
                    add_col(D, t, j, -k)
                    add_col(V, t, j, -k)
                if D[t][j]:
                    done = False
            if not done:
                continue
            # divisibility condition d_t | rest
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(D, bad[0], t, 1)
            add_row(U, bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return U, D, V


def max_symmetry_group(W) -> SymmetryGroup:
    """G_W^max = {g : A g in Z^m}, via the Smith form of the exponent matrix."""
    n = W.nvars
    if n == 0:
        return SymmetryGroup(W, (), (GroupElement(()),))
    A = exponent_matrix(W).rows
    _, D, V = smith_normal_form(A)
    diag = [D[i][i] if i < len(D) else 0 for i in range(n)]
    if any(d == 0 for d in diag):
        raise InfiniteGroupError(f"exponent matrix of {W} has rank < {n}; the symmetry group is infinite")
    raw = []
    for i, d in enumerate(diag):
        if d == 1:
            continue
        raw.append(GroupElement(tuple(Fraction(V[r][i], d) for r in range(n))))
    elements = _closure(raw, n)
    return SymmetryGroup(W, _minimal_generators(elements, n), elements)


def sl_subgroup(G: SymmetryGroup) -> SymmetryGroup:
    elements = tuple(g for g in G.elements if g.in_sl())
    return SymmetryGroup(G.W, _minimal_generators(elements, G.nvars), elements)


def is_symmetry(W, g):
    """Return the first monomial exponent violated by g, or None."""
    for row in exponent_matrix(W).rows:
        if sum((a * p for a, p in zip(row, g.phases)), Fraction(0)) % 1:
            return row
    return None


def subgroup_generated(W, gens) -> SymmetryGroup:
    n = W.nvars
    elems = []
    for g in gens:
        if not isinstance(g, GroupElement):
            g = GroupElement(tuple(g))
        if len(g) != n:
            raise InputError(f"group element {g} has {len(g)} phases, expected {n}")
        if n:
            bad = is_symmetry(W, g)
            if bad is not None:
                raise NotASymmetryError(
                    f"{g} does not preserve the monomial {mono_str(bad, W.variables)}",
                    element=g.to_str(), monomial=mono_str(bad, W.variables))
        elems.append(g)
    elements = _closure(elems, n)
    return SymmetryGroup(W, tuple(e for e in elems if not e.is_zero()), elements)


def exponent_group(W) -> GroupElement:
    """J = (q_1, ..., q_n)."""
    from .structure import compute_weights

    return GroupElement(compute_weights(W).q)


def fixed_locus(g: GroupElement) -> tuple:
    """Indices of the coordinates fixed by g (phase 0)."""
    return tuple(i for i, p in enumerate(g.phases) if p == 0)


def act_on_monomial(g: GroupElement, exp, convention="full", locus=None) -> Fraction:
    """Phase theta with g*(m) = exp(2 pi i theta) m, for m = x^exp.

    ``convention="full"`` uses det(g) over all coordinates; ``"restricted"``
    uses the determinant of g on ``locus`` only.
    """
    if convention == "full":
        det = g.det_phase
    elif convention == "restricted":
        idx = range(len(g)) if locus is None else locus
        det = sum((g.phases[i] for i in idx), Fraction(0))
    else:
        raise ValueError(f"unknown action convention {convention!r}")
    return (det + sum((a * p for a, p in zip(exp, g.phases)), Fraction(0))) % 1


def invariant_monomials(basis, G: SymmetryGroup, convention="full", locus=None, embed=None):
    """Monomials of ``basis`` fixed by every generator of G.

    ``embed`` maps a basis exponent to an ambient-length exponent (for rings
    over a fixed locus); defaults to the identity.
    """
    out = []
    for exp in basis:
        full = embed(exp) if embed else exp
        if all(act_on_monomial(g, full, convention, locus) == 0 for g in G.generators):
            out.append(exp)
    return out


# ---------------------------------------------------------------------------
# well-behaved pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WellBehavedCertificate:
    verdict: bool
    blocks: tuple
    factors: tuple                  # per-block subgroups (elements supported on the block)
    witness: tuple = None           # (element, block) on failure
    reason: str = ""

    def __bool__(self):
        return self.verdict


def _set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def _check_blocks(G, blocks):
    members = G._set
    factors = []
    for block in blocks:
        proj = {g.project(block) for g in G.elements}
        for g in G.elements:
            if g.project(block) not in members:
                return None, (g, block), "projection onto a block is not in G"
        factors.append(tuple(sorted(proj, key=_sort_key)))
    size = 1
    for f in factors:
        size *= len(f)
    if size != G.order:
        return None, (None, None), "G is not the direct sum of its block projections"
    for block in blocks:
        for g in G.elements:
            fixed = [g.phases[i] == 0 for i in block]
            if any(fixed) and not all(fixed):
                return tuple(factors), (g, block), "element fixes some but not all variables of a block"
    return tuple(factors), None, ""


def is_well_behaved(W, G: SymmetryGroup) -> WellBehavedCertificate:
    """Test the all-or-none fixing condition on a disjoint-variable splitting.

    The finest splitting is tried first; coarser merges of components are
    tried when it fails (mixed fixing can only get worse under merging, but
    the direct-sum condition can improve).
    """
    adm = is_admissible(W)
    if not adm:
        raise InputError(f"{W} is not admissible: {adm.reason}")
    for g in G.generators:
        if is_symmetry(W, g) is not None:
            raise GroupError(f"{g} is not a symmetry of {W}")
    comps = variable_components(W)
    first_failure = None
    for part in sorted(_set_partitions(comps), key=lambda p: -len(p)):
        blocks = tuple(tuple(sorted(itertools.chain.from_iterable(grp))) for grp in part)
        blocks = tuple(sorted(blocks))
        if not all(is_admissible(block_summand(W, b).restrict(b)) for b in blocks):
            continue
        factors, witness, reason = _check_blocks(G, blocks)
        if witness is None:
            return WellBehavedCertificate(True, blocks, factors)
        if first_failure is None:
            first_failure = (blocks, factors or (), witness, reason)
    blocks, factors, witness, reason = first_failure
    return WellBehavedCertificate(False, blocks, factors, witness, reason)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def parse_group_elements(text, n=None):
    """Parse ``"1/2,1/2;0,1/3"`` into a list of GroupElement."""
    out = []
    text = text.strip()
    if not text:
        return out
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            phases = tuple(Fraction(p.strip()) for p in chunk.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad group element {chunk!r}: {exc}") from None
        if n is not None and len(phases) != n:
            raise InputError(f"group element {chunk!r} has {len(phases)} phases, expected {n}")
        out.append(GroupElement(phases))
    return out


def format_group(G: SymmetryGroup):
    return ";".join(g.to_str() for g in G.generators)
