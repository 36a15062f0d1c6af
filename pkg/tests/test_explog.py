from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expfield.errors import DomainError, PrecisionExhausted
from expfield.explog import (
    exp_p,
    exp_terms_needed,
    factorial_valuation,
    in_exp_domain,
    log_p,
    partial_sum,
    tail_minimizers,
    tail_valuation,
    truncation_order,
)
from expfield.padic import PadicNumber, from_rational, uniformizer
from oracles import exp_mod, exp_partial, legendre, log_partial, ord_q, residue

PRIMES = [2, 3, 5, 7, 13]


def domain_rational(p, v, u):
    """A rational of valuation v (unit part u) for prime p."""
    u = Fraction(u)
    while u.numerator % p == 0:
        u /= p
    while u.denominator % p == 0:
        u *= p
    return u * Fraction(p) ** v


@st.composite
def domain_points(draw, primes=PRIMES, max_val=3):
    p = draw(st.sampled_from(primes))
    v = draw(st.integers(2 if p == 2 else 1, max_val))
    u = draw(st.fractions(min_value=-10**6, max_value=10**6, max_denominator=1000).filter(lambda q: q != 0))
    return p, domain_rational(p, v, u)


def test_in_exp_domain_examples():
    assert not in_exp_domain(from_rational(2, 2))
    assert in_exp_domain(from_rational(4, 2))
    assert in_exp_domain(uniformizer(5, 3))


def test_factorial_valuation_examples():
    assert factorial_valuation(0, 7) == 0
    assert factorial_valuation(25, 5) == 6
    assert factorial_valuation(4, 2) == 3


@given(st.integers(0, 2000), st.sampled_from(PRIMES + [97]))
def test_factorial_valuation_legendre(n, p):
    assert factorial_valuation(n, p) == legendre(n, p)


def test_truncation_order_examples():
    assert truncation_order(from_rational(5, 5), 3) == 4
    assert truncation_order(from_rational(4, 2), 1) == 3
    x = from_rational(49, 7)
    assert truncation_order(x, 0) == x.valuation
    with pytest.raises(DomainError):
        truncation_order(from_rational(2, 2), 1)


def test_exp_examples():
    one = exp_p(PadicNumber.zero(5, 10), 10)
    assert one.valuation == 0 and one.residue_digits(10) == 1
    y = exp_p(from_rational(5, 5), 3)
    assert y.absolute_precision == 3
    assert y.residue_digits(3) == 81 == residue(exp_partial(5, 3), 5, 3)
    with pytest.raises(DomainError):
        exp_p(from_rational(2, 2), 8)


def test_exp_precision_exhausted():
    with pytest.raises(PrecisionExhausted):
        exp_p(from_rational(5, 5, 3), 10)


def test_log_examples():
    assert log_p(from_rational(1, 5), 10).is_zero()
    r = log_p(exp_p(from_rational(5, 5), 6), 6)
    assert r.congruent(from_rational(5, 5), 6)
    with pytest.raises(DomainError):
        log_p(from_rational(3, 2), 5)


def test_extension_exp():
    pi = uniformizer(5, 3, 10)
    y = exp_p(pi, 3)
    assert (y - 1).valuation == pi.valuation
    # exp(pi)^3 = exp(3 pi)
    assert (y * y * y).congruent(exp_p(3 * pi, 3), 3)


def test_known_tail_law_counterexamples():
    # the first omitted term does not always carry the tail valuation
    for p, x, N, actual, law in [(2, 4, 2, 6, 5), (2, 4, 6, 9, 10), (5, 5, 23, 19, 20), (13, 156, 11, 13, 12)]:
        X = from_rational(x, p, 80)
        diff = exp_p(X, 60) - exp_partial(x, N)
        assert diff.valuation == actual
        assert truncation_order(X, N) == law
        assert tail_valuation(X, N) <= actual


@given(domain_points(), st.integers(0, 30))
def test_tail_lower_bound_and_unique_minimizer(pt, N):
    p, x = pt
    X = from_rational(x, p, 120)
    diff = exp_p(X, 110) - exp_partial(x, N)
    bound = tail_valuation(X, N)
    assert diff.valuation >= bound
    if len(tail_minimizers(X, N)) == 1:
        assert diff.valuation == bound


@given(domain_points(primes=[37, 41, 43, 97]), st.integers(0, 30))
def test_tail_law_for_large_primes(pt, N):
    # for p > N + 1 the term valuations n*v strictly increase, so the law is exact
    p, x = pt
    X = from_rational(x, p, 120)
    diff = exp_p(X, 100) - exp_partial(x, N)
    assert diff.valuation == truncation_order(X, N)


@given(domain_points(), st.integers(1, 40))
def test_exp_matches_oracle(pt, k):
    p, x = pt
    y = exp_p(from_rational(x, p, 50), k)
    assert y.residue_digits(k) == exp_mod(x, p, k)


@given(domain_points(), domain_points())
def test_homomorphism(a, b):
    p, x = a
    y = domain_rational(p, 2 if p == 2 else 1, b[1])
    X, Y = from_rational(x, p, 40), from_rational(y, p, 40)
    assert exp_p(X + Y, 30).congruent(exp_p(X, 30) * exp_p(Y, 30), 30)


@given(domain_points())
def test_isometry(pt):
    p, x = pt
    X = from_rational(x, p, 40)
    assert (exp_p(X, 30) - 1).valuation == X.valuation


@given(domain_points(), st.integers(1, 30))
def test_log_inverts_exp(pt, k):
    p, x = pt
    X = from_rational(x, p, 60)
    assert log_p(exp_p(X, k + 5), k).congruent(X, k)


@given(domain_points())
def test_log_matches_partial_sums(pt):
    p, z = pt
    Y = from_rational(1 + z, p, 40)
    k = 15
    # enough terms: val(z^n/n) >= n*v - log_p(n) > k once n is large
    n = 1
    while n * ord_q(z, p) - len(format(n, "b")) < k + 2:
        n += 1
    assert log_p(Y, k).residue_digits(k) == residue(log_partial(z, n), p, k)


@given(st.sampled_from([37, 41, 43, 97]), st.integers(1, 3), st.integers(1, 10**6), st.integers(0, 12), st.integers(1, 8), st.integers(1, 8))
def test_pseudo_cauchy_large_primes(p, v, u, N1, d1, d2):
    # with p > N3 the term valuations n*v strictly increase
    x = domain_rational(p, v, u)
    N2 = N1 + d1
    N3 = N2 + d2
    s = [exp_partial(x, N) for N in (N1, N2, N3)]
    assert ord_q(s[2] - s[1], p) > ord_q(s[1] - s[0], p)


def test_pseudo_cauchy_fails_at_small_primes():
    # ties between consecutive term valuations break the strict inequality
    x = 77
    s = {N: exp_partial(x, N) for N in (5, 6, 13)}
    assert ord_q(s[13] - s[6], 7) == ord_q(s[6] - s[5], 7) == 6
    # p = 3, x = 3: val(x^n/n!) = (n + digit sum)/2 ties infinitely often
    t = {N: exp_partial(3, N) for N in (400, 401, 406)}
    assert ord_q(t[406] - t[401], 3) <= ord_q(t[401] - t[400], 3)


def test_partial_sum_matches_oracle():
    X = from_rational(9, 3, 30)
    for N in range(8):
        got = partial_sum(X, N)
        assert got.congruent(from_rational(exp_partial(9, N), 3, 30), 30)


def test_terms_needed_is_minimal():
    X = from_rational(5, 5, 40)
    N = exp_terms_needed(X, 20)
    assert tail_valuation(X, N) >= 20
    assert tail_valuation(X, N - 1) < 20
