"""Q-varieties in G_a^n x G_m^n, exponential-point membership, and the
bounded-degree algebraic independence test for Hahn series."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd
from typing import Optional, Tuple

from ._infinity import INFINITY
from .errors import InsufficientTruncation, ParseError, PrecisionExhausted
from .explog import exp_p, require_exp_domain
from .expr import Parser, evaluate
from .hahn import GroupElement, HahnSeries, as_group_element, derive
from .linalg import kernel, primitive_integer_vector
from .polynomial import Polynomial


def variety_variables(n):
    return tuple(f"X{i}" for i in range(1, n + 1)) + tuple(f"Y{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class VarietySpec:
    n: int
    polys: Tuple[Polynomial, ...]
    declared_dimension: Optional[int] = None

    @property
    def variables(self):
        return variety_variables(self.n)

    def __str__(self):
        head = f"n={self.n};"
        if self.declared_dimension is not None:
            head += f" dim={self.declared_dimension};"
        return head + "".join(f" {p};" for p in self.polys)


def _header_int(parser, key):
    tok = parser.tok
    if tok.kind != "name" or tok.text != key:
        parser.error(f"expected '{key}='")
    parser.advance()
    parser.expect("=")
    num = parser.tok
    if num.kind != "num":
        parser.error("expected an integer")
    parser.advance()
    if not parser.at_end():
        parser.expect(";")
    return int(num.text), num


def parse_variety(text):
    """Parse ``n=<int>; [dim=<int>;] P1; P2; ...`` into a VarietySpec."""
    parser = Parser(text)
    n, tok = _header_int(parser, "n")
    if n < 1:
        raise ParseError("n must be positive", tok.line, tok.column)
    dim = None
    if parser.tok.kind == "name" and parser.tok.text == "dim":
        nxt = parser.tokens[parser.pos + 1]
        if nxt.kind == "op" and nxt.text == "=":
            dim, _ = _header_int(parser, "dim")
    variables = variety_variables(n)
    names = {v: Polynomial.var(variables, v) for v in variables}
    polys = []
    while not parser.at_end():
        node = parser.expression()
        value = evaluate(node, names)
        if not isinstance(value, Polynomial):
            value = Polynomial.constant(variables, value)
        polys.append(value)
        if not parser.at_end():
            parser.expect(";")
    if not polys:
        raise ParseError("a variety needs at least one polynomial", parser.tok.line, parser.tok.column)
    return VarietySpec(n, tuple(polys), dim)


def eval_poly(P, point):
    """Evaluate P at a point of p-adic numbers (X values then Y values)."""
    value = P.evaluate(point)
    if not hasattr(value, "p"):
        # constant polynomial: embed exactly alongside the point
        return point[0]._exact(value)
    return value


# -- membership -------------------------------------------------------------


@dataclass(frozen=True)
class MemberToPrecision:
    precision: Fraction

    def __str__(self):
        return f"MemberToPrecision({self.precision})"


@dataclass(frozen=True)
class NonMember:
    index: int
    valuation: Fraction

    def __str__(self):
        return f"NonMember(index={self.index}, valuation={self.valuation})"


@dataclass(frozen=True)
class Undecided:
    reason: str

    def __str__(self):
        return f"Undecided({self.reason})"


def exp_point_membership(V, xbar, prec):
    """Does (xbar, exp_p(xbar)) lie on V, as far as precision ``prec`` can tell?"""
    if len(xbar) != V.n:
        raise ValueError(f"expected {V.n} coordinates, got {len(xbar)}")
    for x in xbar:
        require_exp_domain(x)
    try:
        ybar = [exp_p(x, prec) for x in xbar]
    except PrecisionExhausted as exc:
        return Undecided(str(exc))
    point = list(xbar) + ybar
    known = None
    for i, P in enumerate(V.polys):
        try:
            value = eval_poly(P, point)
        except PrecisionExhausted as exc:
            return Undecided(f"polynomial {i}: {exc}")
        if not value.is_zero():
            return NonMember(i, value.valuation)
        a = value.absolute_precision
        known = a if known is None else min(known, a)
    return MemberToPrecision(known)


def hahn_point_membership(V, ybar, zbar, K=INFINITY):
    """Index of the first polynomial not vanishing at (ybar, zbar) below K, or None."""
    point = list(ybar) + list(zbar)
    rank = point[0].rank
    for i, P in enumerate(V.polys):
        value = P.evaluate(point)
        if not isinstance(value, HahnSeries):
            value = HahnSeries.constant(value, rank=rank)
        if not value.truncate(K).is_zero():
            return i
    return None


# -- bounded-degree independence ---------------------------------------------


@dataclass(frozen=True)
class IndependentUpTo:
    degree: int

    def __str__(self):
        return f"IndependentUpTo({self.degree})"


@dataclass(frozen=True)
class Relation:
    polynomial: object

    def __str__(self):
        return f"Relation({self.polynomial})"


def monomial_exponents(m, d):
    """Exponent vectors of total degree <= d, by degree, then s1 before s2."""
    out = []
    for deg in range(d + 1):
        for combo in combinations_with_replacement(range(m), deg):
            exps = [0] * m
            for i in combo:
                exps[i] += 1
            out.append(tuple(exps))
    return out


def _rank1_grid_size(exponents, low, K):
    """Number of points of the group generated by ``exponents`` in [low, K)."""
    num = 0
    den = 1
    for g in exponents:
        q = g.coords[0]
        den = den * q.denominator // gcd(den, q.denominator)
    for g in exponents:
        num = gcd(num, int(g.coords[0] * den))
    if num == 0:
        return 1
    step = Fraction(num, den)
    lo = -((-low.coords[0]) // step)
    hi = -((-K.coords[0]) // step)
    return max(0, int(hi - lo))


def _coefficient_matrix(products, columns):
    support = sorted({g for s in products for g, _ in s.terms}, key=lambda g: g.coords)
    coeff = [dict(s.terms) for s in products]
    return [[c.get(g, Fraction(0)) for c in coeff] for g in support], support


def bounded_degree_independence(series, d, K=INFINITY):
    """Search for a polynomial relation of degree <= d among ``series`` below K.

    Returns Relation(P) with P a primitive integer polynomial in s1..sm, or
    IndependentUpTo(d). Raises InsufficientTruncation when the truncation
    leaves fewer exponent constraints than unknown monomial coefficients.
    """
    series = list(series)
    if not series:
        raise ValueError("need at least one series")
    rank = series[0].rank
    if any(s.rank != rank for s in series):
        raise ValueError("series of different ranks")
    if K is not INFINITY:
        K = as_group_element(K, rank)
    monos = monomial_exponents(len(series), d)

    powers = [[HahnSeries.constant(1, rank=rank)] for _ in series]
    products = []
    for exps in monos:
        prod = HahnSeries.constant(1, rank=rank)
        for i, k in enumerate(exps):
            while len(powers[i]) <= k:
                powers[i].append((powers[i][-1] * series[i]).truncate(K))
            prod = (prod * powers[i][k]).truncate(K)
        products.append(prod)
    K_eff = min([K] + [s.order for s in products])
    products = [s.truncate(K_eff) for s in products]

    matrix, support = _coefficient_matrix(products, len(monos))
    if K_eff is not INFINITY:
        if rank == 1 and support:
            low = min(min(s.valuation for s in products if not s.is_zero()), GroupElement.zero(1))
            constraints = _rank1_grid_size(support, low, K_eff)
        else:
            constraints = len(support)
        if len(monos) > constraints:
            raise InsufficientTruncation(
                f"{len(monos)} monomials of degree <= {d} but only {constraints} "
                f"exponent constraints below {K_eff}"
            )
    basis = kernel(matrix, len(monos))
    if not basis:
        return IndependentUpTo(d)
    v = basis[0]
    names = tuple(f"s{i}" for i in range(1, len(series) + 1))
    if all(isinstance(x, Fraction) for x in v):
        v = primitive_integer_vector(v)
        return Relation(Polynomial(names, dict(zip(monos, v))))
    import sympy

    syms = sympy.symbols(names)
    lead = next(x for x in v if x != 0)
    expr = sum(
        sympy.cancel(c / lead) * sympy.Mul(*[s**k for s, k in zip(syms, exps)])
        for c, exps in zip(v, monos)
    )
    return Relation(sympy.expand(expr))


def constant_combinations(ys, K=INFINITY):
    """Primitive integer vectors m (a kernel basis) with D(sum m_i y_i) = 0 below K."""
    if K is not INFINITY and ys:
        K = as_group_element(K, ys[0].rank)
    ds = [derive(y).truncate(K) for y in ys]
    K_eff = min([K] + [s.order for s in ds])
    ds = [s.truncate(K_eff) for s in ds]
    matrix, _ = _coefficient_matrix(ds, len(ds))
    return [primitive_integer_vector(v) for v in kernel(matrix, len(ds))]
