"""p-adic floating point numbers over Q_p and the Eisenstein extensions
Q_p(pi), pi^e = p.

A nonzero element is stored as ``pi^k * W`` where ``W = w_0 + w_1 pi + ...
+ w_{e-1} pi^{e-1}`` is a unit (``p`` does not divide ``w_0``) known modulo
``pi^R``. ``k`` and ``R`` count powers of ``pi``, so the p-adic valuation is
``k/e`` and the absolute precision ``(k + R)/e``. For ``e = 1`` this is the
familiar valuation/mantissa/relative-precision triple. A zero element only
records the absolute precision ``M`` (in powers of ``pi``) to which it is known
to vanish.

Arithmetic follows the usual floating point rules: products keep the smaller
relative precision, sums keep the smaller absolute precision and recompute the
valuation, so cancellation shrinks the relative precision.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from ._infinity import INFINITY
from .errors import DivisionByIndistinguishableZero, ParseError, PrecisionExhausted

DEFAULT_PRECISION = 64

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=4096)
def is_prime(n):
    """Deterministic Miller-Rabin (exact for n < 3.3 * 10^24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p):
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def primes_up_to(n):
    return [q for q in range(2, n + 1) if is_prime(q)]


def first_primes(count):
    out, q = [], 2
    while len(out) < count:
        if is_prime(q):
            out.append(q)
        q += 1
    return out


def int_valuation(n, p):
    """ord_p of a nonzero integer."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(q, p):
    """ord_p of a rational; INFINITY for zero."""
    q = Fraction(q)
    if q == 0:
        return INFINITY
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def _ceil_div(a, b):
    return -(-a // b)


@lru_cache(maxsize=4096)
def _moduli(p, e, R):
    """Moduli of the coefficients of an element known modulo pi^R."""
    return tuple(p ** max(0, _ceil_div(R - i, e)) for i in range(e))


def _reduce(vec, p, e, R):
    return tuple(c % m for c, m in zip(vec, _moduli(p, e, R)))


def _pi_valuation(vec, p, e):
    best = None
    for i, c in enumerate(vec):
        if c:
            v = e * int_valuation(c, p) + i
            if best is None or v < best:
                best = v
    return best


def _shift_up(vec, j, p, e):
    """Multiply by pi^j (j >= 0) in Z[pi]/(pi^e - p)."""
    q, r = divmod(j, e)
    scale = p**q
    out = [0] * e
    for i, c in enumerate(vec):
        t = i + r
        if t < e:
            out[t] += c * scale
        else:
            out[t - e] += c * scale * p
    return tuple(out)


def _shift_down(vec, j, p, e):
    """Divide by pi^j; the caller guarantees the quotient is integral."""
    q, r = divmod(j, e)
    scale = p**q
    out = [0] * e
    for i, c in enumerate(vec):
        assert c % scale == 0
        c //= scale
        t = i - r
        if t >= 0:
            out[t] += c
        else:
            assert c % p == 0
            out[t + e] += c // p
    return tuple(out)


def _mul_vec(a, b, p, e):
    out = [0] * e
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            t = i + j
            if t < e:
                out[t] += x * y
            else:
                out[t - e] += p * x * y
    return tuple(out)


def _inverse_unit(w, p, e, R):
    top = p ** _ceil_div(R, e)
    z = (pow(w[0], -1, top),) + (0,) * (e - 1)
    if e == 1:
        return _reduce(z, p, e, R)
    one = (1,) + (0,) * (e - 1)
    # Newton: z <- z (2 - w z) doubles the number of correct pi-digits
    for _ in range(R.bit_length() + 2):
        wz = _reduce(_mul_vec(w, z, p, e), p, e, R)
        if wz == one:
            return z
        correction = tuple((2 if i == 0 else 0) - c for i, c in enumerate(wz))
        z = _reduce(_mul_vec(z, correction, p, e), p, e, R)
    raise AssertionError("unit inversion did not converge")


def _split_exact(coeffs, p, e):
    """Write sum coeffs[i] pi^i as pi^k * ints / (pi^kk * den_unit); None for 0."""
    reduced = [Fraction(0)] * e
    for j, c in enumerate(coeffs):
        q, r = divmod(j, e)
        reduced[r] += Fraction(c) * p**q
    if not any(reduced):
        return None
    den = 1
    for c in reduced:
        den = den * c.denominator // gcd(den, c.denominator)
    s = int_valuation(den, p) if den % p == 0 else 0
    den_unit = den // p**s
    ints = tuple(int(c * den) for c in reduced)
    kk = _pi_valuation(ints, p, e)
    return kk - e * s, kk, ints, den_unit


def exact_pi_valuation(coeffs, p, e):
    split = _split_exact(coeffs, p, e)
    return INFINITY if split is None else split[0]


def _prime_power(n):
    """Return (q, a) with n == q**a for a prime q, else None."""
    if n < 2:
        return None
    q = 2
    while q * q <= n and n % q:
        q += 1
    if n % q:
        q = n
    a = 0
    while n % q == 0:
        n //= q
        a += 1
    return (q, a) if n == 1 else None


class PadicNumber:
    """Element of Q_p(pi) with pi^e = p, tracked to finite precision.

    Use :func:`from_rational`, :func:`eisenstein_element`, :func:`uniformizer`
    or :func:`parse_padic` to build values; the constructor takes the raw
    internal representation.
    """

    __slots__ = ("p", "e", "_k", "_unit", "_prec")

    def __init__(self, p, e, k, unit, prec):
        self.p = p
        self.e = e
        if k is None:
            self._k = None
            self._unit = ()
            self._prec = prec
            return
        if prec < 1:
            raise ValueError("relative precision must be positive")
        unit = _reduce(tuple(unit), p, e, prec)
        if len(unit) != e or unit[0] % p == 0:
            raise ValueError("mantissa is not a unit")
        self._k = k
        self._unit = unit
        self._prec = prec

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p, absprec, e=1):
        """Zero known modulo p^absprec."""
        absprec = Fraction(absprec)
        return cls(p, e, None, (), _ceil_div(absprec.numerator * e, absprec.denominator))

    @classmethod
    def from_exact(cls, coeffs, p, e, absprec_pi):
        """Embed the exact element sum(coeffs[i] * pi^i), known modulo pi^absprec_pi."""
        split = _split_exact(coeffs, p, e)
        if split is None:
            return cls(p, e, None, (), absprec_pi)
        k, kk, ints, den_unit = split
        if k >= absprec_pi:
            return cls(p, e, None, (), absprec_pi)
        R = absprec_pi - k
        w = _shift_down(ints, kk, p, e)
        inv = pow(den_unit, -1, p ** _ceil_div(R, e))
        return cls(p, e, k, tuple(c * inv for c in w), R)

    # -- accessors ----------------------------------------------------------

    def is_zero(self):
        """True when the element is indistinguishable from zero."""
        return self._k is None

    @property
    def valuation(self):
        if self._k is None:
            return INFINITY
        return Fraction(self._k, self.e)

    @property
    def pi_valuation(self):
        return INFINITY if self._k is None else self._k

    @property
    def absolute_precision(self):
        return Fraction(self.absprec_pi, self.e)

    @property
    def absprec_pi(self):
        return self._prec if self._k is None else self._k + self._prec

    @property
    def relative_precision(self):
        return Fraction(0) if self._k is None else Fraction(self._prec, self.e)

    @property
    def unit(self):
        """Unit mantissa: an int for e = 1, else the coefficient tuple."""
        if self.e == 1:
            return self._unit[0] if self._unit else None
        return self._unit

    def coefficients(self):
        """Rationals c_i with self = sum c_i pi^i to the known precision."""
        if self._k is None:
            return (Fraction(0),) * self.e
        q, r = divmod(self._k, self.e)
        vec = _shift_up(self._unit, r, self.p, self.e)
        M = self.absprec_pi
        out = []
        for i, c in enumerate(vec):
            digits = _ceil_div(M - i, self.e)
            if q >= 0:
                out.append(Fraction((c * self.p**q) % self.p ** max(0, digits)))
            else:
                out.append(Fraction(c % self.p ** max(0, digits - q), self.p ** (-q)))
        return tuple(out)

    def lift(self):
        """Rational representative (only for e = 1)."""
        if self.e != 1:
            raise ValueError("lift() needs e = 1; use coefficients()")
        return self.coefficients()[0]

    def residue_digits(self, digits, shift=0):
        """Integer representative of self * p^(-shift) modulo p^digits (e = 1)."""
        if self.e != 1:
            raise ValueError("residue_digits() needs e = 1")
        if self.absolute_precision < digits + shift:
            raise PrecisionExhausted(f"need absolute precision {digits + shift}, have {self.absolute_precision}")
        if self._k is None:
            return 0
        q = self.lift() / Fraction(self.p) ** shift
        if q.denominator != 1:
            raise ValueError("element is not integral after the shift")
        return q.numerator % self.p**digits

    def integral_coefficients(self, shift, digits):
        """Integer coefficients of self * pi^(-shift) in the basis 1, pi, ..., pi^(e-1),
        each reduced modulo p^digits."""
        if self.absprec_pi < shift + self.e * digits:
            raise PrecisionExhausted(
                f"need absolute precision {Fraction(shift, self.e) + digits}, have {self.absolute_precision}"
            )
        if self._k is None:
            return (0,) * self.e
        j = self._k - shift
        if j < 0:
            raise ValueError("element is not integral after the shift")
        mod = self.p**digits
        return tuple(c % mod for c in _shift_up(self._unit, j, self.p, self.e))

    # -- coercion -----------------------------------------------------------

    def with_ramification(self, e):
        """The same element viewed in Q_p(pi') with pi'^e = p (self.e | e)."""
        if e == self.e:
            return self
        if e % self.e:
            raise ValueError(f"ramification {self.e} does not divide {e}")
        f = e // self.e
        if self._k is None:
            return PadicNumber(self.p, e, None, (), self._prec * f)
        unit = [0] * e
        for i, c in enumerate(self._unit):
            unit[i * f] = c
        return PadicNumber(self.p, e, self._k * f, unit, self._prec * f)

    def add_bigoh(self, absprec):
        """Forget digits beyond absolute precision ``absprec`` (p-units)."""
        absprec = Fraction(absprec)
        M = _ceil_div(absprec.numerator * self.e, absprec.denominator)
        if M >= self.absprec_pi:
            return self
        if self._k is None or M <= self._k:
            return PadicNumber(self.p, self.e, None, (), M)
        return PadicNumber(self.p, self.e, self._k, self._unit, M - self._k)

    def _exact(self, q):
        """Embed an exact rational without limiting either precision."""
        q = Fraction(q)
        if self._k is None:
            rel, M = 1, self._prec
        else:
            rel, M = self._prec, self._k + self._prec
        if q == 0:
            return PadicNumber(self.p, self.e, None, (), M + rel)
        kq = self.e * rational_valuation(q, self.p)
        R = max(rel, M - kq, 1)
        return PadicNumber.from_exact([q], self.p, self.e, kq + R)

    def _common(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"cannot combine {self.p}-adic and {other.p}-adic numbers")
            if other.e != self.e:
                e = self.e * other.e // gcd(self.e, other.e)
                return self.with_ramification(e), other.with_ramification(e)
            return self, other
        if isinstance(other, Rational):
            return self, self._exact(other)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        p, e = x.p, x.e
        M = min(x.absprec_pi, y.absprec_pi)
        if x._k is None or y._k is None:
            nonzero = y if x._k is None else x
            if nonzero._k is None:
                return PadicNumber(p, e, None, (), M)
            return nonzero.add_bigoh(Fraction(M, e))
        k = min(x._k, y._k)
        rel = M - k
        s = tuple(
            a + b
            for a, b in zip(_shift_up(x._unit, x._k - k, p, e), _shift_up(y._unit, y._k - k, p, e))
        )
        s = _reduce(s, p, e, rel)
        j = _pi_valuation(s, p, e)
        if j is None:
            return PadicNumber(p, e, None, (), M)
        return PadicNumber(p, e, k + j, _shift_down(s, j, p, e), rel - j)

    __radd__ = __add__

    def __neg__(self):
        if self._k is None:
            return self
        return PadicNumber(self.p, self.e, self._k, tuple(-c for c in self._unit), self._prec)

    def __sub__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        if x._k is None or y._k is None:
            if x._k is None and y._k is None:
                M = x._prec + y._prec
            elif x._k is None:
                M = x._prec + y._k
            else:
                M = y._prec + x._k
            return PadicNumber(x.p, x.e, None, (), M)
        R = min(x._prec, y._prec)
        return PadicNumber(x.p, x.e, x._k + y._k, _mul_vec(x._unit, y._unit, x.p, x.e), R)

    __rmul__ = __mul__

    def inverse(self):
        if self._k is None:
            raise DivisionByIndistinguishableZero(
                f"division by O({self.p}^{self.absolute_precision}), which is zero to the known precision"
            )
        inv = _inverse_unit(self._unit, self.p, self.e, self._prec)
        return PadicNumber(self.p, self.e, -self._k, inv, self._prec)

    def __truediv__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        return pair[0] * pair[1].inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if isinstance(n, Fraction) and n.denominator == 1:
            n = int(n)
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return self._exact(1) if result is None else result

    # -- comparison ---------------------------------------------------------

    def _key(self):
        return (self.p, self.e, self._k, self._unit, self._prec)

    def __eq__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def congruent(self, other, absprec):
        """True if self - other vanishes to absolute precision ``absprec``."""
        diff = self - other
        if diff.absolute_precision < absprec:
            return False
        return diff.valuation >= absprec

    # -- text ---------------------------------------------------------------

    def __repr__(self):
        return f"PadicNumber({self})"

    def __str__(self):
        p, e = self.p, self.e
        if e == 1:
            if self._k is None:
                return f"O({p}^{self._prec})"
            return f"{p}^{self._k} * {self._unit[0]} + O({p}^{self._k + self._prec})"
        parts = []
        for i, c in enumerate(self.coefficients()):
            if not c:
                continue
            mono = "" if i == 0 else ("pi" if i == 1 else f"pi^{i}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" {'+' if c > 0 else '-'} {body}")
        parts.append(f"{' + ' if parts else ''}O(pi^{self.absprec_pi})")
        return "".join(parts)


# -- module level constructors ----------------------------------------------


def from_rational(x, p, r=DEFAULT_PRECISION, e=1):
    """Image of a rational in Q_p (or Q_p(pi)) with relative precision r p-digits.

    Zero is known to absolute precision r.
    """
    check_prime(p)
    if r < 1:
        raise ValueError("relative precision must be at least 1")
    x = Fraction(x)
    if x == 0:
        return PadicNumber(p, e, None, (), r * e)
    k = e * rational_valuation(x, p)
    return PadicNumber.from_exact([x], p, e, k + r * e)


def uniformizer(p, e, r=DEFAULT_PRECISION):
    check_prime(p)
    return PadicNumber(p, e, 1, (1,) + (0,) * (e - 1), r * e)


def eisenstein_element(coeffs, p, e):
    """sum coeffs[i] * pi^i in Q_p(pi), pi^e = p.

    Coefficients are elements of Q_p (PadicNumber with e = 1) or rationals; at
    least one must be a PadicNumber to fix the precision.
    """
    check_prime(p)
    if len(coeffs) != e:
        raise ValueError(f"expected {e} coefficients, got {len(coeffs)}")
    ref = next((c for c in coeffs if isinstance(c, PadicNumber)), None)
    if ref is None:
        raise ValueError("at least one coefficient must carry a precision")
    total = None
    for i, c in enumerate(coeffs):
        if not isinstance(c, PadicNumber):
            c = ref._exact(c)
        if c.p != p or c.e != 1:
            raise ValueError("coefficients must lie in Q_p for the same prime")
        c = c.with_ramification(e)
        if c._k is None:
            term = PadicNumber(p, e, None, (), c._prec + i)
        else:
            term = PadicNumber(p, e, c._k + i, c._unit, c._prec)
        total = term if total is None else total + term
    return total


def parse_padic(text, p=None, e=1, r=DEFAULT_PRECISION):
    """Parse ``p^v * u + O(p^a)`` or ``c0 + c1*pi + ... + O(pi^k)``.

    Without an ``O(...)`` term the value is exact and gets relative precision r.
    """
    from .expr import evaluate, flatten_sum, parse_expression
    from .polynomial import Polynomial

    pi = Polynomial.var(("pi",), "pi")
    names = {"pi": pi} if e > 1 else {}
    exact = Fraction(0)
    bigoh = None
    for sign, node in flatten_sum(parse_expression(text)):
        if node[0] == "call" and node[1] == "O":
            tok = node[3]
            if bigoh is not None or sign < 0 or len(node[2]) != 1:
                raise ParseError("malformed O(...) term", tok.line, tok.column)
            bound = evaluate(node[2][0], names)
            if isinstance(bound, Polynomial):
                terms = list(bound.terms.items())
                if len(terms) != 1 or terms[0][1] != 1:
                    raise ParseError("O(...) must contain a power of pi", tok.line, tok.column)
                bigoh = ("pi", terms[0][0][0])
            else:
                q = Fraction(bound)
                base = q.numerator if q.denominator == 1 else q.denominator
                pp = _prime_power(base) if (q.numerator == 1 or q.denominator == 1) else None
                if pp is None:
                    raise ParseError("O(...) must contain a power of a prime", tok.line, tok.column)
                a = pp[1] if q.denominator == 1 else -pp[1]
                if p is None:
                    p = pp[0]
                elif pp[0] != p:
                    raise ParseError(f"O(...) uses prime {pp[0]}, expected {p}", tok.line, tok.column)
                bigoh = ("p", a)
            continue
        value = evaluate(node, names)
        exact = exact + value if sign > 0 else exact - value
    if p is None:
        raise ParseError("cannot infer the prime; pass it explicitly")
    check_prime(p)
    if isinstance(exact, Polynomial):
        degree = exact.degree()
        coeffs = [exact.terms.get((i,), Fraction(0)) for i in range(max(degree, 0) + 1)]
    else:
        coeffs = [Fraction(exact)]
    if bigoh is None:
        if not any(coeffs):
            return PadicNumber(p, e, None, (), r * e)
        return PadicNumber.from_exact(coeffs, p, e, exact_pi_valuation(coeffs, p, e) + r * e)
    M = bigoh[1] if bigoh[0] == "pi" else bigoh[1] * e
    return PadicNumber.from_exact(coeffs, p, e, M)
