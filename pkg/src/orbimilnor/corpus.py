"""A fixed corpus of admissible polynomials used by the self-test and the test suite."""

# (text, expected atomic kinds); kinds are None for noninvertible polynomials
CORPUS = [
    ("x^2", ["fermat"]),
    ("x^3", ["fermat"]),
    ("x^5", ["fermat"]),
    ("x^6", ["fermat"]),
    ("x^4+y^4", ["fermat", "fermat"]),
    ("x^2+y^6", ["fermat", "fermat"]),
    ("x^3+y^5", ["fermat", "fermat"]),
    ("x^2*y+y^3", ["chain"]),
    ("x^3*y+y^4", ["chain"]),
    ("x^2*y+y^5", ["chain"]),
    ("x^2+x*y^3", ["chain"]),
    ("x^3*y+x*y^3", ["loop"]),
    ("x^2*y+x*y^4", ["loop"]),
    ("x^4*y+x*y^2", ["loop"]),
    ("x^2+y^3+z^4", ["fermat", "fermat", "fermat"]),
    ("x^2*y+y^2*z+z^3", ["chain"]),
    ("x^2*y+y^2*z+z^3*x", ["loop"]),
    ("x^2+y^3*z+z^4", ["fermat", "chain"]),
    ("x^2+y^2+z^2+w^2", ["fermat"] * 4),
    ("x^3+y^3*z+z^2*w+w^3", ["fermat", "chain"]),
    ("x^2*y+x*y^2+z^3+w^4", ["loop", "fermat", "fermat"]),
    ("x^2*y+y^2*z+z^2*w+w^2*x", ["loop"]),
    ("x^2+x*y^3+y^6", None),
    ("x^2+x*y^5+y^10", None),
    ("x^4+y^4+x^2*y^2", None),
    ("x^3+y^3+x*y^2", None),
]


def corpus_polynomials():
    from .polynomial import parse_polynomial

    return [parse_polynomial(text) for text, _ in CORPUS]


def example_family(n):
    """The three polynomials x^2+y^{2n}, x^2+xy^n+y^{2n}, x^2+xy^n."""
    return [f"x^2+y^{2 * n}", f"x^2+x*y^{n}+y^{2 * n}", f"x^2+x*y^{n}"]
