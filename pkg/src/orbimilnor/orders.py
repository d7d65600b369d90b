"""Monomial orders on exponent tuples."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm


@dataclass(frozen=True)
class MonomialOrder:
    """Either ``"wdegrevlex"`` (weighted degree, ties by reverse lex) or ``"lex"``.

    Both are multiplicative total orders with 1 minimal.  ``key`` maps an
    exponent tuple to a sort key; larger key means larger monomial.
    """

    kind: str = "wdegrevlex"
    weights: tuple = ()

    def __post_init__(self):
        if self.kind not in ("wdegrevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        w = tuple(Fraction(x) for x in self.weights)
        if any(x <= 0 for x in w):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "weights", w)
        # integer weights: same order, cheaper comparisons
        if w:
            den = lcm(*(x.denominator for x in w))
            object.__setattr__(self, "_iw", tuple(int(x * den) for x in w))
        else:
            object.__setattr__(self, "_iw", ())

    @classmethod
    def grevlex(cls, nvars):
        return cls("wdegrevlex", (1,) * nvars)

    @classmethod
    def weighted(cls, weights):
        return cls("wdegrevlex", tuple(weights))

    @classmethod
    def lex(cls):
        return cls("lex", ())

    def key(self, exp):
        if self.kind == "lex":
            return exp
        iw = self._iw
        if len(iw) != len(exp):
            iw = (1,) * len(exp)
        return (sum(w * a for w, a in zip(iw, exp)), tuple(-a for a in reversed(exp)))

    def weighted_degree(self, exp):
        if self.kind == "lex" or not self.weights:
            return Fraction(sum(exp))
        return sum((w * a for w, a in zip(self.weights, exp)), Fraction(0))

    def describe(self):
        if self.kind == "lex":
            return "lex"
        return "wdegrevlex(" + ",".join(str(w) for w in self.weights) + ")"


LEX = MonomialOrder.lex()
