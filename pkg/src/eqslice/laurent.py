"""Sparse one-variable Laurent polynomials with exact integer coefficients.

The variable is abstract: exponents are integers, and callers decide what
one exponent unit means (a power of A for bracket polynomials, a power of
t^(1/2) for Jones polynomials).
"""

from __future__ import annotations


class LaurentPolynomial:
    """Map from integer exponent to nonzero integer coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        self.coeffs = {e: c for e, c in coeffs.items() if c != 0}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def monomial(cls, coeff, exponent):
        return cls({exponent: coeff})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPolynomial()
            return LaurentPolynomial({e: c * other for e, c in self.coeffs.items()})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = LaurentPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shifted(self, k):
        """Multiply by variable**k."""
        return LaurentPolynomial({e + k: c for e, c in self.coeffs.items()})

    def substituted_inverse(self):
        """Image under variable -> variable**-1."""
        return LaurentPolynomial({-e: c for e, c in self.coeffs.items()})

    def min_exponent(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no exponents")
        return min(self.coeffs)

    def max_exponent(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no exponents")
        return max(self.coeffs)

    def evaluate_at_i(self):
        """Evaluate with the variable set to the imaginary unit.

        Returns a Gaussian integer (re, im).  Used for determinants: with
        exponents counting powers of t^(1/2), setting t^(1/2) = i is the
        evaluation t = -1.
        """
        re = im = 0
        for e, c in self.coeffs.items():
            q = e % 4
            if q == 0:
                re += c
            elif q == 1:
                im += c
            elif q == 2:
                re -= c
            else:
                im -= c
        return re, im

    def format_terms(self, render_exponent):
        """Ascending-exponent text like ``-1*A^4 + 1*A^0``."""
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            parts.append("%d*%s" % (self.coeffs[e], render_exponent(e)))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return "LaurentPolynomial(%r)" % (self.coeffs,)


def format_bracket(poly):
    """Bracket polynomials print in integer powers of A."""
    return poly.format_terms(lambda e: "A^%d" % e)


def format_jones(poly):
    """Jones polynomials print in half-integer powers of t: ``c*t^(k/2)``."""
    return poly.format_terms(lambda e: "t^(%d/2)" % e)


def parse_jones(text):
    """Inverse of :func:`format_jones`, used by the obstruction database."""
    text = text.strip()
    if text == "0":
        return LaurentPolynomial()
    coeffs = {}
    for chunk in text.replace("- ", "+ -").split(" + "):
        coeff_part, _, exp_part = chunk.partition("*")
        if not exp_part.startswith("t^(") or not exp_part.endswith("/2)"):
            raise ValueError("bad Jones term %r" % chunk)
        e = int(exp_part[3:-3])
        coeffs[e] = coeffs.get(e, 0) + int(coeff_part)
    return LaurentPolynomial(coeffs)
