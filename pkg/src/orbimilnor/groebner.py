"""Buchberger's algorithm, normal forms and standard monomials."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

from .orders import MonomialOrder
from .polynomial import Polynomial, mono_div, mono_divides, mono_lcm, mono_mul


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    order: MonomialOrder
    reduced: bool = True
    variables: tuple = ()

    @property
    def leading_monomials(self):
        return [g.leading_term(self.order)[0] for g in self.generators]

    def is_unit(self):
        return len(self.generators) == 1 and all(a == 0 for a in self.leading_monomials[0])

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _reduce_terms(terms, basis, order):
    """Fully reduce a term dict by ``basis`` = list of (lm, lc, terms)."""
    p = dict(terms)
    rem = {}
    key = order.key
    while p:
        exp = max(p, key=key)
        c = p[exp]
        for lm, lc, gterms in basis:
            if mono_divides(lm, exp):
                shift = mono_div(exp, lm)
                f = c / lc
                for ge, gc in gterms.items():
                    e = mono_mul(ge, shift)
                    v = p.get(e, 0) - f * gc
                    if v:
                        p[e] = v
                    else:
                        p.pop(e, None)
                break
        else:
            rem[exp] = c
            del p[exp]
    return rem


def _spoly(f, g):
    lm_f, lc_f, tf = f
    lm_g, lc_g, tg = g
    L = mono_lcm(lm_f, lm_g)
    sf, sg = mono_div(L, lm_f), mono_div(L, lm_g)
    out = {}
    for e, c in tf.items():
        out[mono_mul(e, sf)] = c / lc_f
    for e, c in tg.items():
        k = mono_mul(e, sg)
        v = out.get(k, 0) - c / lc_g
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _entry(terms, order):
    lm = max(terms, key=order.key)
    return (lm, terms[lm], terms)


def buchberger(generators, order):
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Normal pair selection (smallest lcm first) with Buchberger's coprime and
    chain criteria.  Output is monic and sorted by descending leading term,
    hence canonical for the ideal and order.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator to fix the variable list")
    variables = generators[0].variables
    for g in generators:
        if g.variables != variables:
            raise ValueError("generators must share the ambient variables")
    key = order.key

    basis = []
    for g in generators:
        if g.terms:
            r = _reduce_terms(g.terms, basis, order) if basis else dict(g.terms)
            if r:
                basis.append(_entry(r, order))
    if not basis:
        return GroebnerBasis((), order, True, variables)

    pairs = set()
    heap = []

    def push(i, j):
        L = mono_lcm(basis[i][0], basis[j][0])
        pairs.add((i, j))
        heapq.heappush(heap, (key(L), i, j, L))

    for i, j in itertools.combinations(range(len(basis)), 2):
        push(i, j)
    while heap:
        _, i, j, L = heapq.heappop(heap)
        pairs.discard((i, j))
        lm_i, lm_j = basis[i][0], basis[j][0]
        if L == mono_mul(lm_i, lm_j):  # coprime leading monomials
            continue
        if _chain_criterion(i, j, L, basis, pairs):
            continue
        r = _reduce_terms(_spoly(basis[i], basis[j]), basis, order)
        if r:
            basis.append(_entry(r, order))
            k = len(basis) - 1
            for m in range(k):
                push(m, k)
            if all(a == 0 for a in basis[k][0]):
                break  # unit ideal
    return GroebnerBasis(_interreduce(basis, order, variables), order, True, variables)


def _chain_criterion(i, j, L, basis, pairs):
    for k, (lm_k, _, _) in enumerate(basis):
        if k in (i, j) or not mono_divides(lm_k, L):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def _interreduce(basis, order, variables):
    # drop elements whose leading monomial is divisible by another's
    lms = [b[0] for b in basis]
    keep = []
    for idx, lm in enumerate(lms):
        dominated = False
        for jdx, other in enumerate(lms):
            if jdx == idx or not mono_divides(other, lm):
                continue
            if other != lm or jdx < idx:
                dominated = True
                break
        if not dominated:
            keep.append(basis[idx])
    out = []
    for idx, (lm, lc, terms) in enumerate(keep):
        others = [b for jdx, b in enumerate(keep) if jdx != idx]
        tail = {e: c for e, c in terms.items() if e != lm}
        tail = _reduce_terms(tail, others, order)
        monic = {e: c / lc for e, c in tail.items()}
        monic[lm] = 1
        out.append(Polynomial(variables, monic))
    out.sort(key=lambda p: order.key(p.leading_term(order)[0]), reverse=True)
    return tuple(out)


def normal_form(p, gb):
    """The unique remainder of ``p`` modulo the Groebner basis."""
    if p.variables != gb.variables:
        raise ValueError(f"variable mismatch: {p.variables} vs {gb.variables}")
    entries = [_entry(g.terms, gb.order) for g in gb.generators]
    return Polynomial(p.variables, _reduce_terms(p.terms, entries, gb.order))


def staircase_bounds(gb):
    """Per-variable pure-power bounds, or None when the staircase is unbounded."""
    n = len(gb.variables)
    bounds = [None] * n
    for lm in gb.leading_monomials:
        support = [i for i, a in enumerate(lm) if a]
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or lm[i] < bounds[i]:
                bounds[i] = lm[i]
        elif not support:
            return [0] * n
    if any(b is None for b in bounds):
        return None
    return bounds


def standard_monomials(gb):
    """Monomials not divisible by any leading monomial, ascending in the basis order.

    Returns ``None`` when the quotient is infinite dimensional.
    """
    n = len(gb.variables)
    if not gb.generators:
        return [()] if n == 0 else None
    bounds = staircase_bounds(gb)
    if bounds is None:
        return None
    lms = gb.leading_monomials
    out = [e for e in itertools.product(*(range(b) for b in bounds))
           if not any(mono_divides(lm, e) for lm in lms)]
    out.sort(key=gb.order.key)
    return out


def ideal_is_unit(generators, order=None):
    generators = [g for g in generators]
    if not generators:
        return False
    if order is None:
        order = MonomialOrder.grevlex(generators[0].nvars)
    return buchberger(generators, order).is_unit()
