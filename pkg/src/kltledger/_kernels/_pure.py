"""Pure-Python kernels: exact integer linear algebra and continued fractions.

These are the hot inner loops of basket and scenario enumeration.  A compiled
Cython twin (`_speedups`) implements the same three functions with identical
semantics; `kltledger._kernels` picks one at import time.  Everything here is
exact: values are arbitrary-precision Python ints, results are reduced integer
pairs (numerator, positive denominator).
"""

from __future__ import annotations

from math import gcd

__all__ = ["solve_int_system", "leading_minors", "cf_evaluate"]


def solve_int_system(matrix, rhs):
    """Solve M x = b exactly for integer M (n x n) and integer b.

    Fraction-free (Bareiss) forward elimination followed by exact back
    substitution.  Returns a list of reduced ``(num, den)`` pairs with
    ``den > 0``.  Raises ValueError if the matrix is singular.
    """
    n = len(matrix)
    if n == 0:
        return []
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    break
            else:
                raise ValueError("singular matrix")
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    out = [(0, 1)] * n
    for i in range(n - 1, -1, -1):
        # x_i = (b_i - sum_j m[i][j] x_j) / m[i][i], accumulated over a
        # common denominator to stay in integer arithmetic.
        num = m[i][n]
        den = 1
        for j in range(i + 1, n):
            xn, xd = out[j]
            num = num * xd - m[i][j] * xn * den
            den *= xd
            g = gcd(num, den)
            if g > 1:
                num //= g
                den //= g
        den *= m[i][i]
        if den == 0:
            raise ValueError("singular matrix")
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        out[i] = (num, den)
    return out


def leading_minors(matrix):
    """Determinants of the leading principal minors of an integer matrix.

    Computed by fraction-free elimination; entry k is det of the (k+1) x
    (k+1) leading block.  Computation stops after a zero minor (the later
    pivots are undefined in the fraction-free recurrence), so the returned
    list may be shorter than n; its last entry is then 0.
    """
    n = len(matrix)
    m = [list(row) for row in matrix]
    minors = []
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0:
            break
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors


def cf_evaluate(weights):
    """Evaluate [b1, ..., bk] = b1 - 1/(b2 - 1/(...)) to a reduced pair.

    Returns ``(n, q)`` with n/q the value of the continued fraction and
    gcd(n, q) = 1.  For all-``b >= 2`` input the intermediate denominators
    are the continuants and never vanish.
    """
    n, q = 1, 0
    for b in reversed(weights):
        n, q = b * n - q, n
    g = gcd(n, q)
    if g > 1:
        n //= g
        q //= g
    if n < 0:
        n, q = -n, -q
    return n, q
