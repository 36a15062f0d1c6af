"""The p-adic exponential and logarithm on their discs of convergence.

The number of series terms is read off from exact valuations of the tail
terms ``x^n/n!`` (Legendre's formula), never from a convergence heuristic.
"""

import math
from fractions import Fraction

from ._infinity import INFINITY
from .errors import DomainError, PrecisionExhausted
from .padic import PadicNumber, int_valuation


def _digit_sum(n, p):
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


def factorial_valuation(n, p):
    """ord_p(n!) = (n - s_p(n)) / (p - 1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (n - _digit_sum(n, p)) // (p - 1)


def exp_radius_valuation(p):
    """Valuations strictly above this lie in the convergence disc of exp."""
    return Fraction(1, p - 1)


def in_exp_domain(x):
    return x.valuation > exp_radius_valuation(x.p)


def require_exp_domain(x):
    if not in_exp_domain(x):
        raise DomainError(
            f"valuation {x.valuation} is not > 1/({x.p}-1); the exponential series diverges"
        )


def exp_term_valuation(v, p, n):
    """Valuation of x^n/n! when x has valuation v."""
    return n * v - factorial_valuation(n, p)


def truncation_order(x, N):
    """Valuation of the first omitted term x^(N+1)/(N+1)!.

    This equals the valuation of exp_p(x) - s_N(x) whenever that first term
    is the unique term of least valuation in the tail; see tail_valuation for
    the bound that holds unconditionally.
    """
    require_exp_domain(x)
    if x.is_zero():
        return INFINITY
    return exp_term_valuation(x.valuation, x.p, N + 1)


def _tail_terms(v, p, N):
    """Valuations of x^n/n! for n > N up to the point where none can be smaller."""
    margin = v - exp_radius_valuation(p)
    base = exp_radius_valuation(p)
    out = []
    best = None
    n = N + 1
    # ord_p(n!) <= (n-1)/(p-1), so val(x^n/n!) >= n*margin + 1/(p-1)
    while best is None or n * margin + base <= best:
        val = exp_term_valuation(v, p, n)
        out.append((n, val))
        if best is None or val < best:
            best = val
        n += 1
    return out


def tail_valuation(x, N):
    """min over n > N of val(x^n/n!): a lower bound for val(exp_p(x) - s_N(x)),
    attained whenever the minimum is achieved by a single n."""
    require_exp_domain(x)
    if x.is_zero():
        return INFINITY
    return min(val for _, val in _tail_terms(x.valuation, x.p, N))


def tail_minimizers(x, N):
    """The indices n > N achieving tail_valuation(x, N)."""
    require_exp_domain(x)
    terms = _tail_terms(x.valuation, x.p, N)
    best = min(val for _, val in terms)
    return [n for n, val in terms if val == best]


def exp_terms_needed(x, target):
    """Least N with every omitted term of valuation >= target."""
    require_exp_domain(x)
    if x.is_zero():
        return 0
    v, p = x.valuation, x.p
    margin = v - exp_radius_valuation(p)
    N = 0
    n = 1
    while n * margin + exp_radius_valuation(p) < target:
        if exp_term_valuation(v, p, n) < target:
            N = n
        n += 1
    return N


def _one(x, absprec):
    return PadicNumber.from_exact([1], x.p, x.e, _pi_digits(absprec, x.e))


def _pi_digits(absprec, e):
    absprec = Fraction(absprec)
    return -(-absprec.numerator * e // absprec.denominator)


def partial_sum(x, N):
    """s_N(x) = sum_{n <= N} x^n / n! in p-adic arithmetic."""
    total = x._exact(1)
    term = None
    for n in range(1, N + 1):
        term = x if term is None else term * x / n
        total = total + term
    return total


def exp_p(x, target_abs_prec):
    """exp_p(x) known to absolute precision ``target_abs_prec``."""
    require_exp_domain(x)
    target = Fraction(target_abs_prec)
    if x.absolute_precision < target:
        raise PrecisionExhausted(
            f"argument known to O(p^{x.absolute_precision}), cannot give O(p^{target})"
        )
    x = x.add_bigoh(target)
    if x.is_zero():
        return _one(x, target)
    return partial_sum(x, exp_terms_needed(x, target)).add_bigoh(target)


def _log_term_valuation(w, p, n):
    return n * w - int_valuation(n, p)


def log_terms_needed(z, target):
    """Least N with val(z^n/n) >= target for every n > N (z = y - 1)."""
    w, p = z.valuation, z.p
    N = 0
    n = 1
    # val(z^n/n) >= n*w - log_p(n), increasing once n > 1/(w ln p)
    rising = 1 / (float(w) * math.log(p)) + 1
    while n < rising or n * float(w) - math.log(n, p) - 1e-9 < target:
        if _log_term_valuation(w, p, n) < target:
            N = n
        n += 1
    return N


def log_p(y, target_abs_prec):
    """log_p(y) = sum (-1)^(n+1) (y-1)^n / n for val(y - 1) > 1/(p-1)."""
    z = y - 1
    if not in_exp_domain(z):
        raise DomainError(f"log_p needs val(y - 1) > 1/({y.p}-1), got {z.valuation}")
    target = Fraction(target_abs_prec)
    if z.absolute_precision < target:
        raise PrecisionExhausted(
            f"argument known to O(p^{z.absolute_precision}), cannot give O(p^{target})"
        )
    z = z.add_bigoh(target)
    if z.is_zero():
        return PadicNumber.zero(z.p, target, z.e)
    total = None
    power = None
    for n in range(1, log_terms_needed(z, target) + 1):
        power = z if power is None else power * z
        term = power / n
        if n % 2 == 0:
            term = -term
        total = term if total is None else total + term
    return total.add_bigoh(target)
