"""Integral LLL reduction and exact short-vector enumeration."""

from fractions import Fraction
from math import floor

from .errors import ExpFieldError


class DependentRows(ExpFieldError, ValueError):
    pass


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis, delta=Fraction(3, 4)):
    """LLL-reduce the rows of an integer matrix.

    All arithmetic is on integers (Gram determinants d_i and the scaled
    Gram-Schmidt coefficients lambda_ij = d_{j+1} * mu_ij), so the result is
    exact and depends only on the input order.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError("delta must lie in (1/4, 1]")
    a, c = delta.numerator, delta.denominator
    b = [[int(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return []
    lam = [[0] * n for _ in range(n)]
    d = [0] * (n + 1)
    d[0] = 1

    def gram(k):
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise DependentRows("basis rows are linearly dependent")
                d[k + 1] = u

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = floor(Fraction(1, 2) + Fraction(lam[k][l], d[l + 1]))
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lk * lk) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lk * t) // d[k]
            lam[i][k - 1] = (B * t + lk * lam[i][k]) // d[k + 1]
        d[k] = B

    gram(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gram(k)
        red(k, k - 1)
        if c * d[k + 1] * d[k - 1] < a * d[k] * d[k] - c * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b


def gram_schmidt(basis):
    """Exact Gram-Schmidt data: (mu, squared norms of the b*_i)."""
    n = len(basis)
    mu = [[Fraction(0)] * n for _ in range(n)]
    star = []
    norms = []
    for i, row in enumerate(basis):
        v = [Fraction(x) for x in row]
        for j in range(i):
            mu[i][j] = _dot(row, star[j]) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        norms.append(_dot(v, v))
    return mu, norms


def enumerate_short_vectors(basis, radius_sq, visit):
    """Depth-first enumeration of lattice vectors with squared norm <= radius_sq.

    Each nonzero vector is visited once up to sign (the last nonzero
    coefficient is positive). ``visit(vector, norm_sq)`` may return a smaller
    squared radius to prune the rest of the search.
    """
    n = len(basis)
    if n == 0:
        return
    mu, norms = gram_schmidt(basis)
    if any(nb == 0 for nb in norms):
        raise DependentRows("basis rows are linearly dependent")
    dim = len(basis[0])
    bound = [Fraction(radius_sq)]
    x = [0] * n

    def emit():
        v = [0] * dim
        for i, xi in enumerate(x):
            if xi:
                v = [a + xi * b for a, b in zip(v, basis[i])]
        norm = _dot(v, v)
        new = visit(tuple(v), norm)
        if new is not None and new < bound[0]:
            bound[0] = Fraction(new)

    def rec(i, partial, top):
        centre = -sum(x[j] * mu[j][i] for j in range(i + 1, n))
        nb = norms[i]
        start = round(centre)
        # zig-zag outward from the centre
        candidates = []
        for direction in (1, -1):
            xi = start if direction == 1 else start - 1
            while True:
                if top and xi < 0:
                    break
                cost = partial + (xi - centre) ** 2 * nb
                if cost > bound[0]:
                    if (xi - centre) * direction > 0:
                        break
                    xi += direction
                    continue
                candidates.append((cost, xi))
                xi += direction
        candidates.sort(key=lambda ci: (ci[0], ci[1]))
        for cost, xi in candidates:
            if cost > bound[0]:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    emit()
            else:
                rec(i - 1, cost, top and xi == 0)
        x[i] = 0

    rec(n - 1, Fraction(0), True)
