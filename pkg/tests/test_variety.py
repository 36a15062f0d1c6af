from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expfield.errors import DomainError, InsufficientTruncation, ParseError
from expfield.explog import exp_p
from expfield.hahn import GroupElement, HahnSeries, hahn_exp
from expfield.linalg import kernel, rank
from expfield.padic import from_rational
from expfield.polynomial import Polynomial
from expfield.variety import (
    IndependentUpTo,
    MemberToPrecision,
    NonMember,
    Relation,
    Undecided,
    bounded_degree_independence,
    constant_combinations,
    eval_poly,
    exp_point_membership,
    hahn_point_membership,
    monomial_exponents,
    parse_variety,
)

t = HahnSeries.monomial(1)


def test_parse_examples():
    V = parse_variety("n=1; Y1 - X1 - 1")
    assert V.n == 1 and len(V.polys) == 1
    assert V.polys[0] == Polynomial(("X1", "Y1"), {(0, 1): 1, (1, 0): -1, (0, 0): -1})
    W = parse_variety("n=2; X2 - 2*X1; Y2 - Y1^2")
    X1, X2, Y1, Y2 = (Polynomial.var(W.variables, v) for v in ("X1", "X2", "Y1", "Y2"))
    assert W.polys == (X2 - 2 * X1, Y2 - Y1**2)
    with pytest.raises(ParseError) as exc:
        parse_variety("n=1; Z1 - 1")
    assert "undeclared variable 'Z1'" in str(exc.value) and "column 6" in str(exc.value)


def test_parse_grammar_details():
    V = parse_variety("# a comment\nn=2;\ndim=1;\n(X1 + X2)^2 - 1/2*Y1; # tail\nY2 - 3;\n")
    assert V.declared_dimension == 1 and len(V.polys) == 2
    assert parse_variety(str(V)) == V
    for bad, where in [("n=1; Y1 +", "line 1"), ("n=1;\nX1 ^ (1/2)", "line 2"), ("m=1; X1", "line 1")]:
        with pytest.raises(ParseError) as exc:
            parse_variety(bad)
        assert where in str(exc.value)
    with pytest.raises(ParseError):
        parse_variety("n=1;")


def test_eval_poly_examples():
    V = parse_variety("n=1; Y1 - X1 - 1")
    P = V.polys[0]
    assert eval_poly(P, [from_rational(0, 5), from_rational(1, 5)]).is_zero()
    v = eval_poly(P, [from_rational(5, 5), from_rational(1, 5)])
    assert v.valuation == 1 and v.congruent(from_rational(-5, 5), 30)
    W = parse_variety("n=2; X1^2 + X2")
    assert eval_poly(W.polys[0], [from_rational(5, 5), from_rational(-25, 5), from_rational(1, 5), from_rational(1, 5)]).is_zero()


def test_membership_examples():
    V = parse_variety("n=1; Y1 - X1 - 1")
    assert isinstance(exp_point_membership(V, [from_rational(0, 5)], 20), MemberToPrecision)
    W = parse_variety("n=2; X2 - 2*X1; Y2 - Y1^2")
    verdict = exp_point_membership(W, [from_rational(5, 5), from_rational(10, 5)], 20)
    assert verdict == MemberToPrecision(20)
    nm = exp_point_membership(V, [from_rational(5, 5)], 20)
    assert nm == NonMember(0, 2)
    with pytest.raises(DomainError):
        exp_point_membership(V, [from_rational(2, 2)], 10)
    assert isinstance(exp_point_membership(V, [from_rational(5, 5, 3)], 20), Undecided)


@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 3), st.integers(1, 10**6), st.integers(0, 30))
def test_nonmember_is_stable_under_more_precision(p, v, u, extra):
    V = parse_variety("n=1; Y1 - X1 - 1 - X1^2/2")
    x = Fraction(u) * p**v
    base = exp_point_membership(V, [from_rational(x, p, 80)], 10)
    if isinstance(base, NonMember):
        again = exp_point_membership(V, [from_rational(x, p, 80)], 10 + extra)
        assert again == base


def test_bounded_degree_examples():
    assert bounded_degree_independence([t, 2 * t], 1) == Relation(
        Polynomial(("s1", "s2"), {(1, 0): 2, (0, 1): -1})
    )
    assert bounded_degree_independence([t, hahn_exp(t, 100)], 6, 100) == IndependentUpTo(6)
    rel = bounded_degree_independence([hahn_exp(t, 30), hahn_exp(2 * t, 30)], 2, 30)
    assert rel == Relation(Polynomial(("s1", "s2"), {(0, 1): 1, (2, 0): -1}))


def test_bounded_degree_rank_oracle():
    # build the coefficient matrix independently and compare ranks
    K = 100
    e = hahn_exp(t, K)
    cols = []
    for a, b in monomial_exponents(2, 6):
        s = (t**a * e**b).truncate(K)
        cols.append([s.coefficient(k) for k in range(K)])
    rows = [list(r) for r in zip(*cols)]
    assert rank(rows, len(cols)) == len(cols)


def test_insufficient_truncation():
    with pytest.raises(InsufficientTruncation):
        bounded_degree_independence([t, hahn_exp(t, 5)], 3, 5)


def test_monomial_order():
    assert monomial_exponents(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_ax_instance_degrees():
    K = 100
    for d in range(1, 7):
        assert bounded_degree_independence([t, hahn_exp(t, K)], d, K) == IndependentUpTo(d)


def test_proposition_instance():
    K = GroupElement((20,))
    ys = [t, 2 * t]
    zs = [hahn_exp(y, K) for y in ys]
    V = parse_variety("n=2; X2 - 2*X1; Y2 - Y1^2")
    assert hahn_point_membership(V, ys, zs, K) is None
    assert constant_combinations(ys, K) == [(2, -1)]


def test_kernel_determinism():
    rows = [[1, 2, 3], [2, 4, 6]]
    assert kernel(rows, 3) == [[-2, 1, 0], [-3, 0, 1]]
