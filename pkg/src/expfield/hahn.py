"""Finite-rank lexicographic groups and truncated Hahn series k((t^G)).

A :class:`HahnSeries` holds finitely many terms together with a truncation
order ``K``: it is exact for every exponent below ``K`` and says nothing at or
above it. ``K = INFINITY`` marks an exact finite sum. All equalities between
series are therefore statements "below K".
"""

from fractions import Fraction
from functools import total_ordering
from numbers import Rational

from ._infinity import INFINITY
from .errors import DomainError, ParseError


def _is_symbolic(c):
    return type(c).__module__.startswith("sympy")


def _clean(c):
    if isinstance(c, Rational):
        return Fraction(c)
    if _is_symbolic(c):
        import sympy

        return sympy.cancel(c)
    return c


def _is_scalar(c):
    return isinstance(c, Rational) or _is_symbolic(c)


@total_ordering
class GroupElement:
    """Element of Q^r under the lexicographic order."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        if isinstance(coords, Rational):
            coords = (coords,)
        self.coords = tuple(Fraction(c) for c in coords)
        if not self.coords:
            raise ValueError("rank must be at least 1")

    @classmethod
    def zero(cls, rank):
        return cls((0,) * rank)

    @property
    def rank(self):
        return len(self.coords)

    def _check(self, other):
        if not isinstance(other, GroupElement):
            return False
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return GroupElement(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return GroupElement(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return GroupElement(-a for a in self.coords)

    def __mul__(self, n):
        if not isinstance(n, Rational):
            return NotImplemented
        return GroupElement(a * n for a in self.coords)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.coords == other.coords

    def __lt__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.coords < other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def __abs__(self):
        return -self if self < GroupElement.zero(self.rank) else self

    def __repr__(self):
        return f"GroupElement({', '.join(map(str, self.coords))})"

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def as_group_element(value, rank=None):
    if isinstance(value, GroupElement):
        g = value
    elif isinstance(value, tuple):
        g = GroupElement(value)
    elif isinstance(value, Rational):
        g = GroupElement((value,) + (0,) * ((rank or 1) - 1))
    else:
        raise TypeError(f"cannot use {value!r} as a group element")
    if rank is not None and g.rank != rank:
        raise ValueError(f"expected rank {rank}, got {g.rank}")
    return g


def lex_compare(g, h):
    """-1, 0 or 1 as g <, =, > h in the lexicographic order."""
    if g.rank != h.rank:
        raise ValueError(f"rank mismatch: {g.rank} vs {h.rank}")
    return (g.coords > h.coords) - (g.coords < h.coords)


@total_ordering
class ArchClass:
    """Archimedean class of a lexicographic group element.

    Classes are labelled by the position of the first nonzero coordinate;
    larger elements have earlier positions, so ``[g] < [h]`` here means
    ``[g]`` precedes ``[h]`` (g is infinitely larger in absolute value).
    The class of zero is INFINITY, after every other class.
    """

    __slots__ = ("index",)

    def __init__(self, index):
        self.index = index

    def __eq__(self, other):
        if not isinstance(other, ArchClass):
            return NotImplemented
        return self.index == other.index

    def __lt__(self, other):
        if not isinstance(other, ArchClass):
            return NotImplemented
        if self.index is INFINITY:
            return False
        if other.index is INFINITY:
            return True
        return self.index < other.index

    def __hash__(self):
        return hash(self.index)

    def __repr__(self):
        return f"ArchClass({self.index})"


def arch_class(g):
    for i, c in enumerate(g.coords):
        if c:
            return ArchClass(i)
    return ArchClass(INFINITY)


class HahnSeries:
    """Finite-support series sum c_g t^g, exact below ``order``."""

    __slots__ = ("rank", "terms", "order")

    def __init__(self, terms=(), order=INFINITY, rank=None):
        if isinstance(terms, dict):
            terms = terms.items()
        if order is not INFINITY:
            order = as_group_element(order, rank)
            rank = order.rank
        collected = {}
        for g, c in terms:
            g = as_group_element(g, rank)
            rank = g.rank
            collected[g] = collected.get(g, 0) + c
        if rank is None:
            rank = 1
        kept = []
        for g, c in collected.items():
            c = _clean(c)
            if c != 0 and (order is INFINITY or g < order):
                kept.append((g, c))
        kept.sort(key=lambda gc: gc[0].coords)
        self.rank = rank
        self.terms = tuple(kept)
        self.order = order

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c, rank=1, order=INFINITY):
        return cls([(GroupElement.zero(rank), c)], order=order, rank=rank)

    @classmethod
    def monomial(cls, exponent, coeff=1, order=INFINITY, rank=None):
        return cls([(as_group_element(exponent, rank), coeff)], order=order, rank=rank)

    @classmethod
    def zero(cls, order=INFINITY, rank=1):
        return cls((), order=order, rank=rank)

    # -- basic queries ------------------------------------------------------

    @property
    def valuation(self):
        return self.terms[0][0] if self.terms else INFINITY

    def is_zero(self):
        """No terms below the truncation order."""
        return not self.terms

    def support(self):
        return [g for g, _ in self.terms]

    def coefficient(self, g):
        g = as_group_element(g, self.rank)
        if self.order is not INFINITY and g >= self.order:
            raise ValueError(f"coefficient of t^{g} is beyond the truncation order {self.order}")
        for h, c in self.terms:
            if h == g:
                return c
        return Fraction(0)

    def truncate(self, order):
        order = as_group_element(order, self.rank) if order is not INFINITY else order
        new = self.order if order is INFINITY or (self.order is not INFINITY and self.order < order) else order
        return HahnSeries(self.terms, order=new, rank=self.rank)

    def equal_below(self, other, order=INFINITY):
        """self == other for every exponent below both truncation orders and ``order``."""
        return (self - other).truncate(order).is_zero()

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, HahnSeries):
            if other.rank != self.rank:
                raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
            return other
        if _is_scalar(other):
            return HahnSeries.constant(other, rank=self.rank)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return HahnSeries(self.terms + other.terms, order=min(self.order, other.order), rank=self.rank)

    __radd__ = __add__

    def __neg__(self):
        return HahnSeries([(g, -c) for g, c in self.terms], order=self.order, rank=self.rank)

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
        order = min(self.order + other.valuation, other.order + self.valuation)
        products = {}
        for g, a in self.terms:
            for h, b in other.terms:
                gh = g + h
                if order is INFINITY or gh < order:
                    products[gh] = products.get(gh, 0) + a * b
        return HahnSeries(products, order=order, rank=self.rank)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self * (_clean(1 / Fraction(other)) if isinstance(other, Rational) else 1 / other)

    def __pow__(self, n):
        if isinstance(n, Fraction) and n.denominator == 1:
            n = int(n)
        if isinstance(n, int) and n >= 0:
            result = HahnSeries.constant(1, rank=self.rank)
            base = self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        if isinstance(n, (Rational, tuple, GroupElement)) and len(self.terms) == 1 and self.order is INFINITY:
            g, c = self.terms[0]
            if c == 1:
                if isinstance(n, Rational):
                    return HahnSeries.monomial(g * n, rank=self.rank)
                if g == as_group_element(1, self.rank):
                    return HahnSeries.monomial(as_group_element(n, self.rank), rank=self.rank)
        raise ValueError(f"unsupported power {n!r} of a Hahn series")

    # -- comparison / text --------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, HahnSeries):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms and self.order == other.order

    def __hash__(self):
        return hash((self.rank, self.terms, self.order))

    def __repr__(self):
        return f"HahnSeries({self})"

    def __str__(self):
        parts = []
        for g, c in self.terms:
            neg = isinstance(c, Fraction) and c < 0
            mag = -c if neg else c
            if not isinstance(c, Fraction):
                mag = f"({c})"
            if g.is_zero():
                body = str(mag)
            elif mag == 1:
                body = f"t^{g}"
            else:
                body = f"{mag}*t^{g}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" {'-' if neg else '+'} {body}")
        if self.order is not INFINITY:
            parts.append(f"{' + ' if parts else ''}O(t^{self.order})")
        return "".join(parts) or "0"


def hahn_valuation(f):
    return f.valuation


def exp_terms_below(v, K):
    """Least N with (N+1)*v >= K, for v > 0; None if no multiple of v reaches K."""
    zero = GroupElement.zero(v.rank)
    if v <= zero:
        raise DomainError("exp needs a strictly positive valuation")
    if K <= v:
        return 0
    if arch_class(K) < arch_class(v):
        return None
    i = arch_class(v).index
    n = max(1, int(K.coords[i] / v.coords[i]))
    while n * v < K:
        n += 1
    while n > 1 and (n - 1) * v >= K:
        n -= 1
    return n - 1


def hahn_exp(x, K):
    """sum x^n/n! truncated below K, for an infinitesimal x (v(x) > 0)."""
    K = as_group_element(K, x.rank)
    if x.is_zero():
        return HahnSeries.constant(1, rank=x.rank).truncate(K).truncate(x.order)
    v = x.valuation
    if v <= GroupElement.zero(x.rank):
        raise DomainError(f"exp needs an infinitesimal argument, got valuation {v}")
    N = exp_terms_below(v, K)
    if N is None:
        raise DomainError(
            f"infinitely many terms of exp lie below {K}: valuation {v} is infinitesimal relative to it"
        )
    total = HahnSeries.constant(1, rank=x.rank)
    term = total
    for n in range(1, N + 1):
        term = (term * x).truncate(K) / n
        total = total + term
    return total.truncate(K)


def derive(f):
    """D(sum c_g t^g) = sum c_g * g[0] * t^g."""
    return HahnSeries([(g, c * g.coords[0]) for g, c in f.terms], order=f.order, rank=f.rank)


def is_constant(f):
    return derive(f).is_zero()


class _TSymbol:
    """The variable ``t`` while parsing; ``t^g`` builds a monomial."""

    def __init__(self, rank):
        self.rank = rank

    def series(self):
        if self.rank != 1:
            raise ValueError("bare t is ambiguous in rank > 1; write t^(a,b,...)")
        return HahnSeries.monomial(1, rank=1)

    def __pow__(self, exponent):
        if isinstance(exponent, HahnSeries):
            raise ValueError("exponent must be a rational or a tuple of rationals")
        return HahnSeries.monomial(as_group_element(exponent, self.rank), rank=self.rank)

    def __add__(self, other):
        return self.series() + _as_series(other, self.rank)

    def __radd__(self, other):
        return _as_series(other, self.rank) + self.series()

    def __sub__(self, other):
        return self.series() - _as_series(other, self.rank)

    def __rsub__(self, other):
        return _as_series(other, self.rank) - self.series()

    def __mul__(self, other):
        return self.series() * _as_series(other, self.rank)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.series() / other

    def __neg__(self):
        return -self.series()


def _as_series(value, rank):
    if isinstance(value, _TSymbol):
        return value.series()
    if isinstance(value, HahnSeries):
        return value
    if _is_scalar(value):
        return HahnSeries.constant(value, rank=rank)
    raise ValueError(f"not a series: {value!r}")


def _infer_rank(node):
    kind = node[0]
    if kind == "tuple":
        return len(node[1])
    children = []
    if kind == "call":
        children = node[2]
    elif kind == "bin":
        children = [node[2], node[3]]
    elif kind == "neg":
        children = [node[1]]
    for child in children:
        r = _infer_rank(child)
        if r:
            return r
    return None


def series_functions(rank, order=None):
    """Callables available in series expressions: O, exp, D."""

    def bigoh(s):
        s = _as_series(s, rank)
        if len(s.terms) != 1 or s.terms[0][1] != 1 or s.order is not INFINITY:
            raise ValueError("O(...) must contain a monomial t^g")
        return HahnSeries.zero(order=s.valuation, rank=rank)

    def exp(s):
        if order is None:
            raise ValueError("exp(...) needs a truncation order")
        return hahn_exp(_as_series(s, rank), order)

    def deriv(s):
        return derive(_as_series(s, rank))

    return {"O": bigoh, "exp": exp, "D": deriv}


def parse_series(text, rank=None, order=None, names=None):
    """Parse ``c1*t^(a1,b1,...) + ... + O(t^(K...))``.

    ``exp(...)`` (truncated at ``order``) and ``D(...)`` may also appear.
    Extra bindings can be passed in ``names``.
    """
    from .expr import evaluate, parse_expression

    node = parse_expression(text)
    if rank is None:
        rank = _infer_rank(node) or 1
    if order is not None:
        order = as_group_element(order, rank)
    env = {"t": _TSymbol(rank)}
    env.update(names or {})
    try:
        value = evaluate(node, env, series_functions(rank, order))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    return _as_series(value, rank)
