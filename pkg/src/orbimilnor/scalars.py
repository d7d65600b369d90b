"""Exact coefficients: rationals and elements of simple extensions Q[t]/(m(t)).

Plain rationals are ``fractions.Fraction``.  An element of a proper extension
is a :class:`Scalar`, a coefficient vector over Q reduced modulo the monic
modulus of its :class:`Field`.  Scalars mix freely with ``int`` and
``Fraction`` operands.
"""

from __future__ import annotations

import itertools
import warnings
from fractions import Fraction
from functools import cached_property
from numbers import Rational

from .errors import InputError, ReducibleModulusError

# ---------------------------------------------------------------------------
# dense univariate polynomials over Q, coefficient lists low -> high
# ---------------------------------------------------------------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def upoly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([Fraction(x) - y for x, y in zip(a, b)])


def upoly_divmod(a, b):
    """Quotient and remainder of a by nonzero b."""
    a = _trim([Fraction(x) for x in a])
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] -= f * y
        a = _trim(a)
    return _trim(q), a


def upoly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    if not a:
        return []
    return [x / a[-1] for x in a]


def upoly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = upoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, upoly_sub(s0, upoly_mul(q, s1))
        t0, t1 = t1, upoly_sub(t0, upoly_mul(q, t1))
    lead = r0[-1]
    return [x / lead for x in r0], [x / lead for x in s0], [x / lead for x in t0]


def upoly_derivative(a):
    return _trim([i * Fraction(c) for i, c in enumerate(a)][1:])


def upoly_str(coeffs, symbol="t"):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (symbol if k == 1 else f"{symbol}^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def is_irreducible_over_q(coeffs):
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t)
    return poly.is_irreducible


def factor_over_q(coeffs):
    """Monic irreducible factors of a univariate rational polynomial (no multiplicities)."""
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                       for c in reversed(coeffs)], t, domain="QQ")
    out = []
    for fac, _mult in poly.factor_list()[1]:
        fc = [Fraction(int(x.p), int(x.q)) for x in reversed(fac.all_coeffs())]
        lead = fc[-1]
        out.append([x / lead for x in fc])
    out.sort(key=lambda f: (len(f), [abs(x) for x in reversed(f)], [x < 0 for x in reversed(f)]))
    return out


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


class Field:
    """The simple extension Q[symbol]/(modulus).

    ``modulus`` is given low -> high and normalized to be monic.  Moduli that
    the toolkit constructs are irreducible by construction; user-supplied ones
    are checked square-free and, when ``strict``, irreducible.
    """

    def __init__(self, modulus, symbol="c", strict=False, check=True):
        m = _trim([Fraction(x) for x in modulus])
        if len(m) < 2:
            raise InputError("extension modulus must be nonconstant")
        lead = m[-1]
        self.modulus = tuple(x / lead for x in m)
        self.symbol = symbol
        self.degree = len(self.modulus) - 1
        if check:
            self._check(strict)

    def _check(self, strict):
        m = list(self.modulus)
        if len(upoly_gcd(m, upoly_derivative(m))) > 1:
            raise ReducibleModulusError(f"modulus {self.modulus_str()} is not square-free")
        if self.degree > 1 and not is_irreducible_over_q(m):
            if strict:
                raise ReducibleModulusError(f"modulus {self.modulus_str()} is reducible over Q")
            warnings.warn(f"reducible modulus {self.modulus_str()}: quotient ring is not a field",
                          stacklevel=3)

    def __eq__(self, other):
        return isinstance(other, Field) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"Field({self.modulus_str()})"

    def modulus_str(self):
        return upoly_str(self.modulus, self.symbol)

    @cached_property
    def generator(self):
        if self.degree == 1:
            return -self.modulus[0]
        return Scalar(self, [0, 1])

    def embed(self, q):
        """Canonical image of a rational (or a Scalar of this field)."""
        if isinstance(q, Scalar):
            if q.field != self:
                raise InputError(f"cannot embed element of {q.field!r} into {self!r}")
            return q
        return Scalar(self, [Fraction(q)])

    def from_poly(self, coeffs):
        return Scalar(self, coeffs)


class Scalar:
    """Element of a proper extension field, stored as a reduced coefficient vector."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        c = [Fraction(x) for x in coeffs]
        m = field.modulus
        d = field.degree
        # reduce modulo the monic modulus
        for k in range(len(c) - 1, d - 1, -1):
            f = c[k]
            if f:
                for i in range(d):
                    c[k - d + i] -= f * m[i]
        c = c[:d] + [Fraction(0)] * (d - len(c))
        self.coeffs = tuple(c)

    # -- coercion -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise TypeError(f"mixed fields {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, Rational)):
            return Scalar(self.field, [Fraction(other)])
        return NotImplemented

    def is_rational(self):
        return all(x == 0 for x in self.coeffs[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            return Scalar(self.field, [a * f for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, upoly_mul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self):
        g, s, _ = upoly_xgcd(list(self.coeffs), list(self.field.modulus))
        if len(g) != 1:
            raise ZeroDivisionError(f"{self} is not invertible modulo {self.field.modulus_str()}")
        return Scalar(self.field, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            if f == 0:
                raise ZeroDivisionError("division by zero")
            return Scalar(self.field, [a / f for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Scalar(self.field, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return upoly_str(self.coeffs, self.field.symbol)


def is_zero(x):
    return not x


def scalar_str(x):
    """Exact textual form; rationals as ``p/q``, extension elements as polynomials."""
    if isinstance(x, Scalar):
        if x.is_rational():
            return str(x.coeffs[0])
        return f"({x})"
    return str(Fraction(x))


def scalar_json(x):
    if isinstance(x, Scalar):
        return {"coeffs": [str(c) for c in x.coeffs], "modulus": x.field.modulus_str(),
                "symbol": x.field.symbol}
    return str(Fraction(x))


def field_of(values):
    """The common extension field of a collection of coefficients, or None for Q."""
    field = None
    for v in values:
        if isinstance(v, Scalar):
            if field is None:
                field = v.field
            elif field != v.field:
                raise TypeError(f"mixed fields {field!r} and {v.field!r}")
    return field


def rational_roots(coeffs):
    """Rational roots of a rational univariate polynomial, ordered |r| ascending, positive first."""
    roots = [-f[0] for f in factor_over_q(coeffs) if len(f) == 2]
    return sorted(set(roots), key=lambda r: (abs(r), r < 0))


def pick_root(coeffs, symbol="c"):
    """A root of a nonconstant rational polynomial.

    Returns a rational root when one exists; otherwise adjoins a root of the
    lowest-degree irreducible factor and returns that field's generator.
    """
    facs = factor_over_q(coeffs)
    if not facs:
        raise ValueError("constant polynomial has no roots")
    rats = rational_roots(coeffs)
    if rats:
        return rats[0]
    field = Field(facs[0], symbol=symbol, check=False)
    return field.generator


def rational_nth_root(q, k):
    """Exact rational k-th root of q, or None."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign = -1
        q = -q
    num = _int_root(q.numerator, k)
    den = _int_root(q.denominator, k)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)


def _int_root(n, k):
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid ** k
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def minimal_polynomial(x):
    """Monic minimal polynomial over Q of a field element (low -> high)."""
    if not isinstance(x, Scalar):
        return [-Fraction(x), Fraction(1)]
    from .linalg import rank, solve

    d = x.field.degree
    powers = [Scalar(x.field, [1]).coeffs]
    p = Scalar(x.field, [1])
    for k in range(1, d + 1):
        p = p * x
        powers.append(p.coeffs)
        cols = [list(r) for r in zip(*powers[:k])]
        if rank(cols) == k and rank([list(r) for r in zip(*powers[:k + 1])]) == k:
            rel = solve(cols, list(powers[k]))
            return [-c for c in rel] + [Fraction(1)]
    raise ArithmeticError("no dependency found")


def rebase(values, generator, symbol="c"):
    """Re-express field elements over a new primitive element ``generator``.

    Returns new values in the field Q[symbol]/(minpoly(generator)).
    """
    from .linalg import solve

    old = generator.field
    mp = minimal_polynomial(generator)
    if len(mp) - 1 != old.degree:
        raise ValueError("generator does not generate the field")
    new = Field(mp, symbol=symbol, check=False)
    powers = [Scalar(old, [1])]
    for _ in range(1, old.degree):
        powers.append(powers[-1] * generator)
    cols = [list(r) for r in zip(*(p.coeffs for p in powers))]
    out = []
    for v in values:
        if not isinstance(v, Scalar):
            out.append(v)
            continue
        coords = solve(cols, list(v.coeffs))
        out.append(Scalar(new, coords))
    return out


def simplest_generator(values):
    """Among the given elements, the primitive element with the lowest-height minimal polynomial."""
    best = None
    vals = [v for v in values if isinstance(v, Scalar)]
    cands = list(vals)
    for a, b in itertools.combinations(vals, 2):
        cands.extend([a + b, a - b])
        if b:
            cands.append(a / b)
    for cand in cands:
        if not cand or cand.is_rational():
            continue
        mp = minimal_polynomial(cand)
        if len(mp) - 1 != cand.field.degree:
            continue
        height = (sum(1 for c in mp if c), max(max(abs(c.numerator), c.denominator) for c in mp if c))
        if best is None or height < best[0]:
            best = (height, cand)
    return None if best is None else best[1]
