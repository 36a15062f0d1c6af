"""Exact Gaussian elimination with a fixed pivoting order."""

from fractions import Fraction
from math import gcd


def _is_zero(x):
    if isinstance(x, (int, Fraction)):
        return x == 0
    import sympy

    return sympy.cancel(x) == 0


def _simplify(x):
    if isinstance(x, (int, Fraction)):
        return x
    import sympy

    return sympy.cancel(x)


def rref(rows, ncols):
    """Reduced row echelon form.

    Pivots are taken column by column, choosing the first row with a nonzero
    entry, so the output depends only on the input order.
    Returns (matrix, pivot_columns).
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not _is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], int) else Fraction(1, m[r][c])
        m[r] = [_simplify(x * inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [_simplify(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def kernel(rows, ncols):
    """Basis of the right kernel, one vector per free column in increasing order."""
    m, pivots = rref(rows, ncols)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def primitive_integer_vector(v):
    """Scale a rational vector to coprime integers with first nonzero entry positive."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return tuple(-x for x in ints) if lead < 0 else tuple(ints)
