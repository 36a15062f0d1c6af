"""Sparse multivariate polynomials with exact rational coefficients."""

from fractions import Fraction
from numbers import Rational


class Polynomial:
    """A polynomial over Q in a fixed, ordered tuple of variables.

    ``terms`` maps exponent tuples to nonzero ``Fraction`` coefficients.
    Instances are treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                exps = tuple(exps)
                if len(exps) != len(self.variables):
                    raise ValueError("exponent tuple does not match the variables")
                clean[exps] = c
        self.terms = clean

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        exps = tuple(int(v == name) for v in variables)
        if not any(exps):
            raise ValueError(f"{name!r} is not one of {variables}")
        return cls(variables, {exps: 1})

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variables")
            return other
        if isinstance(other, Rational):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant():
                raise ValueError("division by a non-constant polynomial")
            other = other.constant_value()
        if not isinstance(other, Rational):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division by zero")
        return self * (1 / Fraction(other))

    def __pow__(self, n):
        if isinstance(n, Fraction) and n.denominator == 1:
            n = int(n)
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponents must be nonnegative integers")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def used_variables(self):
        return {v for e in self.terms for v, k in zip(self.variables, e) if k}

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def evaluate(self, point):
        """Evaluate at ``point`` (one value per variable).

        Only ``+`` and ``*`` of the point's values are used, with rational
        coefficients multiplied in from the left, so any exact ring element
        type works. A polynomial with only a constant term returns a Fraction.
        """
        if len(point) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} values, got {len(point)}")
        powers = [{1: x} for x in point]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                half = power(i, k // 2)
                sq = half * half
                cache[k] = sq * point[i] if k % 2 else sq
            return cache[k]

        total = None
        for exps, c in self.sorted_terms():
            value = None
            for i, k in enumerate(exps):
                if k:
                    value = power(i, k) if value is None else value * power(i, k)
            value = c if value is None else value * c
            total = value if total is None else total + value
        return Fraction(0) if total is None else total

    def __repr__(self):
        return f"Polynomial({self.variables!r}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, k in zip(self.variables, exps):
                if k == 1:
                    factors.append(v)
                elif k:
                    factors.append(f"{v}^{k}")
            mag = abs(c)
            if factors and mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            if not out:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)
