"""Exact multivariate polynomials and the polynomial text grammar.

Grammar (whitespace insignificant)::

    poly   := ['-'] term (('+'|'-') term)*
    term   := [coeff '*'] factor ('*' factor)* | coeff
    factor := var ['^' posint]
    coeff  := int | int '/' posint | extension symbol

An extension symbol is a name bound to a :class:`~orbimilnor.scalars.Field`
through the ``extensions`` mapping; it may also appear as a factor with an
exponent (``c^2*y^2``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import InputError, ParseError
from .orders import LEX
from .scalars import Scalar, scalar_str

Monomial = tuple  # exponent tuple, one entry per ambient variable


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True when monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_str(exp, variables):
    parts = []
    for v, a in zip(variables, exp):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts) if parts else "1"


class Polynomial:
    """A polynomial over Q or a simple extension, in an ordered variable list.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match {n} variables")
            if c:
                if not isinstance(c, Scalar):
                    c = Fraction(c)
                clean[exp] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, variables, c):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        i = variables.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {exp: 1})

    @classmethod
    def monomial(cls, variables, exp, c=1):
        return cls(variables, {tuple(exp): c})

    # -- basic queries -------------------------------------------------------
    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), Fraction(0))

    def sorted_terms(self, order=LEX):
        """Terms in descending order."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order):
        exp = max(self.terms, key=order.key)
        return exp, self.terms[exp]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def support_variables(self):
        used = set()
        for exp in self.terms:
            used.update(i for i, a in enumerate(exp) if a)
        return sorted(used)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Rational, Scalar)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for exp, c in o.terms.items():
            out[exp] = out.get(exp, 0) + c
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, Scalar)):
            return Polynomial(self.variables, {e: c * other for e, c in self.terms.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = mono_mul(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.variables, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, Scalar)):
            inv = 1 / (other if isinstance(other, Scalar) else Fraction(other))
            return self * inv
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, exp, c):
        return Polynomial(self.variables, {mono_mul(e, exp): v * c for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Rational, Scalar)):
            return self == Polynomial.constant(self.variables, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus and substitution ------------------------------------------
    def derivative(self, i):
        out = {}
        for exp, c in self.terms.items():
            a = exp[i]
            if a:
                e = exp[:i] + (a - 1,) + exp[i + 1:]
                out[e] = c * a
        return Polynomial(self.variables, out)

    def compose(self, images):
        """Substitute ``images[i]`` (polynomials in a common ring) for variable i."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if self.nvars == 0:
            raise ValueError("cannot compose a zero-variable polynomial")
        target = images[0].variables
        powers = [dict() for _ in images]

        def power(i, a):
            cache = powers[i]
            if a not in cache:
                cache[a] = images[i] ** a
            return cache[a]

        out = Polynomial(target)
        for exp, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, a in enumerate(exp):
                if a:
                    term = term * power(i, a)
            out = out + term
        return out

    def restrict(self, keep):
        """Set variables outside ``keep`` (indices) to zero and drop them."""
        keep = sorted(keep)
        out = {}
        drop = [i for i in range(self.nvars) if i not in keep]
        for exp, c in self.terms.items():
            if any(exp[i] for i in drop):
                continue
            out[tuple(exp[i] for i in keep)] = c
        return Polynomial(tuple(self.variables[i] for i in keep), out)

    def embed(self, variables):
        """Re-express in a larger ordered variable list."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for exp, c in self.terms.items():
            e = [0] * len(variables)
            for j, a in zip(idx, exp):
                e[j] = a
            out[tuple(e)] = c
        return Polynomial(variables, out)

    def map_coefficients(self, fn):
        return Polynomial(self.variables, {e: fn(c) for e, c in self.terms.items()})

    # -- output ----------------------------------------------------------------
    def to_str(self, order=LEX):
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self.sorted_terms(order):
            mono = mono_str(exp, self.variables)
            neg = not isinstance(c, Scalar) and c < 0
            mag = -c if neg else c
            if mono == "1":
                body = scalar_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{scalar_str(mag)}*{mono}"
            pieces.append(("-" if neg else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r}, vars={self.variables})"


def add_polys(variables, polys):
    out = Polynomial(variables)
    for p in polys:
        out = out + p
    return out


def partial_derivative(p, i):
    if not 0 <= i < p.nvars:
        raise IndexError(f"variable index {i} out of range for {p.nvars} variables")
    return p.derivative(i)


def hessian_matrix(p):
    n = p.nvars
    first = [p.derivative(i) for i in range(n)]
    return [[first[i].derivative(j) for j in range(n)] for i in range(n)]


def determinant(matrix, variables):
    """Determinant of a square matrix of polynomials, by cofactor expansion."""
    n = len(matrix)
    if n == 0:
        return Polynomial.constant(variables, 1)
    if n == 1:
        return matrix[0][0]
    total = Polynomial(variables)
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor, variables)
        total = total + term if j % 2 == 0 else total - term
    return total


def hessian(p):
    return determinant(hessian_matrix(p), p.variables)


def extend_scalars(p, field):
    """Re-embed the coefficients of ``p`` in ``field``."""
    return p.map_coefficients(field.embed)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, extensions):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.fixed = variables is not None
        self.variables = list(variables) if variables is not None else []
        self.extensions = dict(extensions or {})
        field = None
        for f in self.extensions.values():
            if field is not None and f != field:
                raise InputError("all extension symbols must share one field")
            field = f
        self.field = field

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos, self.text)

    def parse(self):
        kind, val, pos = self.peek()
        if kind == "end":
            raise ParseError("empty polynomial", pos, self.text)
        out = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return out

    # polynomials are built as dicts {sorted (name, exp) tuple: coeff}
    def sum(self):
        total = {}
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        _accumulate(total, self.term(), sign)
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                _accumulate(total, self.term(), -1 if val == "-" else 1)
            else:
                return total

    def term(self):
        acc = {(): Fraction(1)}
        while True:
            kind, val, pos = self.peek()
            if kind == "int":
                self.take()
                num = Fraction(val)
                k2, v2, p2 = self.peek()
                if k2 == "op" and v2 == "/":
                    self.take()
                    k3, v3, p3 = self.take()
                    if k3 != "int" or v3 == 0:
                        raise ParseError("expected positive integer denominator", p3, self.text)
                    num = num / v3
                acc = {m: c * num for m, c in acc.items()}
            elif kind == "op" and val == "(":
                self.take()
                inner = self.sum()
                self.expect_op(")")
                acc = _multiply(acc, self._power(inner))
            elif kind == "name":
                self.take()
                exp = self._exponent()
                if val in self.extensions:
                    g = self.extensions[val].generator ** exp
                    acc = {m: g * c for m, c in acc.items()}
                else:
                    if val not in self.variables:
                        if self.fixed:
                            raise ParseError(f"unknown variable {val!r}", pos, self.text)
                        self.variables.append(val)
                    acc = _multiply(acc, {((val, exp),): Fraction(1)})
            elif kind == "end":
                raise ParseError("unexpected end of input", pos, self.text)
            else:
                raise ParseError(f"unexpected {val!r}", pos, self.text)
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                continue
            return acc

    def _exponent(self):
        k2, v2, p2 = self.peek()
        if k2 == "op" and v2 == "^":
            self.take()
            k3, v3, p3 = self.take()
            if k3 != "int":
                raise ParseError("expected integer exponent", p3, self.text)
            if v3 <= 0:
                raise ParseError("exponent must be positive", p3, self.text)
            return v3
        return 1

    def _power(self, poly):
        k = self._exponent()
        out = {(): Fraction(1)}
        for _ in range(k):
            out = _multiply(out, poly)
        return out


def _accumulate(total, part, sign):
    for m, c in part.items():
        v = total.get(m, 0) + sign * c
        if v:
            total[m] = v
        else:
            total.pop(m, None)


def _multiply(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            merged = dict(ma)
            for name, e in mb:
                merged[name] = merged.get(name, 0) + e
            key = tuple(sorted(merged.items()))
            v = out.get(key, 0) + ca * cb
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def parse_polynomial(text, variables=None, extensions=None):
    """Parse ``text`` into an exact :class:`Polynomial`.

    Variable order is ``variables`` when given, else first appearance.
    ``extensions`` maps coefficient symbols to a shared Field.
    """
    parser = _Parser(text, variables, extensions)
    terms = parser.parse()
    names = tuple(parser.variables)
    out = {}
    for mono, coeff in terms.items():
        mono = dict(mono)
        exp = tuple(mono.get(v, 0) for v in names)
        out[exp] = out.get(exp, 0) + coeff
    return Polynomial(names, out)


def parse_scalar(text, field=None):
    """Parse an exact scalar: a rational, or a polynomial in the field's symbol."""
    exts = {field.symbol: field} if field is not None else None
    p = parse_polynomial(text, variables=(), extensions=exts)
    return p.coefficient(())


def jacobian(p):
    """The partial derivatives of ``p``, zero ones dropped."""
    return [d for d in (p.derivative(i) for i in range(p.nvars)) if not d.is_zero()]
