"""Integer linear relations among p-adic numbers: relation lattice + LLL,
with an exhaustive box search as an independent oracle."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import List, Tuple

import numpy as np

from .errors import BoxTooLarge, PrecisionExhausted
from .lattice import enumerate_short_vectors, lll_reduce

BOX_LIMIT = 10**7


@dataclass(frozen=True)
class RelationVector:
    m: Tuple[int, ...]
    certified_precision: Fraction

    def __str__(self):
        return "(" + ", ".join(map(str, self.m)) + ")"


class _NoneFound:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NoneFound"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_NoneFound, ())


NoneFound = _NoneFound()


@dataclass(frozen=True)
class RelationLattice:
    basis: List[List[int]]
    scale: int  # C
    modulus: int  # p^N
    shift: Fraction  # s, the common valuation removed from the inputs
    X: List[Tuple[int, ...]]  # integer representatives (one coordinate per power of pi)
    p: int
    e: int
    digits: int


def _check_inputs(xbar):
    xbar = list(xbar)
    if not xbar:
        raise ValueError("need at least one value")
    p = xbar[0].p
    if any(x.p != p for x in xbar):
        raise ValueError("values for different primes")
    e = 1
    for x in xbar:
        e = e * x.e // gcd(e, x.e)
    return [x.with_ramification(e) for x in xbar], p, e


def _shift_pi(xbar):
    vals = [x.pi_valuation for x in xbar if not x.is_zero()]
    return min(vals) if vals else 0


def relation_lattice(xbar, N):
    """Rows (e_i, C*X_i) and (0, C*p^N), X_i = x_i * p^(-s) mod p^N."""
    xbar, p, e = _check_inputs(xbar)
    s = _shift_pi(xbar)
    X = [x.integral_coefficients(s, N) for x in xbar]
    n = len(xbar)
    mod = p**N
    C = mod
    basis = []
    for i in range(n):
        basis.append([int(i == j) for j in range(n)] + [C * c for c in X[i]])
    for j in range(e):
        basis.append([0] * n + [C * mod * int(j == k) for k in range(e)])
    return RelationLattice(basis, C, mod, Fraction(s, e), X, p, e, N)


def _gcd_all(m):
    g = 0
    for x in m:
        g = gcd(g, x)
    return g


def _normalize(m):
    g = 0
    for x in m:
        g = gcd(g, x)
    if g == 0:
        return None
    m = tuple(x // g for x in m)
    lead = next(x for x in m if x)
    return tuple(-x for x in m) if lead < 0 else m


def verify_relation(xbar, m):
    """Absolute precision to which sum m_i x_i is known to vanish, or None."""
    total = None
    for c, x in zip(m, xbar):
        if c:
            term = x * c
            total = term if total is None else total + term
    if total is None:
        return None
    if not total.is_zero():
        return None
    return total.absolute_precision


def _certify(xbar, m, shift):
    """RelationVector for a primitive, normalized m verified at full precision."""
    prec = verify_relation(xbar, m)
    if prec is None:
        return None
    return RelationVector(m, prec - shift)


def _rank_key(m):
    return (sum(x * x for x in m), max(abs(x) for x in m), tuple(-x for x in m))


def find_relation(xbar, N, B, delta=Fraction(3, 4)):
    """Shortest verified primitive relation with max-norm <= B, or NoneFound.

    The relation lattice is LLL-reduced, then searched exactly within the
    Euclidean ball of radius B*sqrt(n), which contains the whole box; lattice
    vectors with a nonzero last block have norm >= p^N and are never reached
    as long as p^N > B*sqrt(n).
    """
    xbar, p, e = _check_inputs(xbar)
    lat = relation_lattice(xbar, N)
    n = len(xbar)
    if lat.scale * lat.scale <= B * B * n:
        raise ValueError(f"p^N = {lat.scale} is too small for the bound {B}")
    reduced = lll_reduce(lat.basis, delta)
    best = [None]

    def visit(v, norm):
        if any(v[n:]):
            return None
        raw = v[:n]
        if max(abs(x) for x in raw) > B or _gcd_all(raw) != 1:
            return None
        m = _normalize(raw)
        if best[0] is not None and _rank_key(m) >= _rank_key(best[0].m):
            return None
        cert = _certify(xbar, m, lat.shift)
        if cert is None:
            return None
        best[0] = cert
        return norm

    enumerate_short_vectors(reduced, B * B * n, visit)
    return best[0] if best[0] is not None else NoneFound


def _prefilter_digits(p, n, B):
    """Largest j with n * B * p^j safely inside int64."""
    j = 0
    while n * B * p ** (j + 1) < 2**62:
        j += 1
    return j


def brute_force_relation(xbar, N, B):
    """Exhaustive search of the box |m_i| <= B; same verification as find_relation."""
    xbar, p, e = _check_inputs(xbar)
    n = len(xbar)
    if (2 * B + 1) ** n > BOX_LIMIT:
        raise BoxTooLarge(f"(2*{B}+1)^{n} exceeds {BOX_LIMIT} points")
    s = _shift_pi(xbar)
    for x in xbar:
        if x.absprec_pi < s + e * N:
            raise PrecisionExhausted(
                f"need absolute precision {Fraction(s, e) + N}, have {x.absolute_precision}"
            )
    j = min(N, _prefilter_digits(p, n, B))
    q = p**j
    X = np.array([x.integral_coefficients(s, j) for x in xbar], dtype=np.int64)  # n x e
    shift = Fraction(s, e)
    best = None
    values = np.arange(-B, B + 1, dtype=np.int64)
    # vectorise over all coordinates but the first
    if n == 1:
        rest = np.zeros((1, 0), dtype=np.int64)
    else:
        rest = np.array(list(product(range(-B, B + 1), repeat=n - 1)), dtype=np.int64)
    rest_sum = (rest @ X[1:]) % q
    for m0 in values:
        total = (rest_sum + m0 * X[0]) % q
        hits = np.nonzero(~total.any(axis=1))[0]
        for h in hits:
            m = (int(m0),) + tuple(int(v) for v in rest[h])
            if _gcd_all(m) != 1 or _normalize(m) != m:
                continue
            if best is not None and _rank_key(m) >= _rank_key(best.m):
                continue
            cert = _certify(xbar, m, shift)
            if cert is not None:
                best = cert
    return best if best is not None else NoneFound
